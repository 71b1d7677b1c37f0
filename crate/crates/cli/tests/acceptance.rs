//! Acceptance battery: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::E;
use std::time::Instant;

use lemlab::{replay, run, Command, RunConfig};
use lemlab_core::ball::{
    invariant_distance, kappa_constant, lemma51_harness, moebius_apply, poisson_szego, prop52_harness,
    Lemma51Params,
};
use lemlab_core::potentials::{
    discrete_potential, normalize_log_class, poisson_jensen_residual, representation_residual, FnPotential,
};
use lemlab_core::principles::{
    capacity_1d, cartan_cover, corollary44_check, lelong_bound_check, min_modulus_1d, moebius_inclusion_radius,
    nu_constant, theorem42_harness, three_circle_eta0, three_circle_max_check, three_circle_min_harness,
    verify_lemniscate_cover, PlaneSet, Theorem42Params, ThreeCircleParams,
};
use lemlab_core::sampling::{
    green_spec_battery, log_class_measure_battery, log_poly_battery, monic_root_battery, uniform_ball_samples,
    unit_value_poly_battery,
};
use lemlab_core::{CPoint, LogValue, PshOracle, SphereQuadrature, Verdict};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

const CARTAN_EPS: [f64; 3] = [0.05, 0.1, 0.2];

fn cartan_battery() -> Vec<Vec<Complex64>> {
    monic_root_battery(2024, 100, 20, 2.0)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (i, roots) in cartan_battery().iter().enumerate() {
        for eps in CARTAN_EPS {
            let cover = cartan_cover(roots, eps, 1.0).map_err(err)?;
            let sum = cover.content(1.0);
            worst = worst.max(sum / (2.0 * E * eps));
            ensure(sum <= 2.0 * E * eps * (1.0 + 1e-12), || format!("poly {i}, eps {eps}: sum r = {sum}"))?;
            let ok = verify_lemniscate_cover(roots, eps, &cover, 512, 4.0).map_err(err)?;
            ensure(ok, || format!("poly {i}, eps {eps}: lemniscate point outside the discs"))?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("300 covers verified on 512x512 grids over [-4,4]^2, max sum r / 2e eps = {worst:.3}, {secs:.1} s"))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let mut runs = 0;
    for (i, roots) in cartan_battery().iter().enumerate() {
        for eps in CARTAN_EPS {
            for alpha in [0.5, 1.0, 2.0] {
                let cover = cartan_cover(roots, eps, alpha).map_err(err)?;
                let bound = E * (2.0 * eps).powf(alpha);
                let sum = cover.content(alpha);
                worst = worst.max(sum / bound);
                ensure(sum <= bound * (1.0 + 1e-12), || format!("poly {i}, eps {eps}, alpha {alpha}: {sum} > {bound}"))?;
                let ok = verify_lemniscate_cover(roots, eps, &cover, 256, 2.5).map_err(err)?;
                ensure(ok, || format!("poly {i}, eps {eps}, alpha {alpha}: lemniscate point outside"))?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} covers, max sum r^alpha / e(2 eps)^alpha = {worst:.3}, lemniscates checked on 256x256"))
}

fn criterion_3() -> Outcome {
    let mut runs = 0;
    for (i, f) in unit_value_poly_battery(303, 50, 12, 0.05, 3.0).iter().enumerate() {
        for eta in [0.1, 0.3] {
            let r = min_modulus_1d(f, 1.0, eta, 201).map_err(err)?;
            ensure(r.passed(), || format!("poly {i}, eta {eta}: {:?} {:?}", r.counts, r.constants))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} runs on 201x201 grids of B_1, zero violations"))
}

fn criterion_4() -> Outcome {
    let samples = uniform_ball_samples(404, 1, 5.0, 2000);
    let mut runs = 0;
    for (i, mu) in log_class_measure_battery(404, 100, 20, 5.0).iter().enumerate() {
        let v = discrete_potential(mu).map_err(err)?;
        for eta in [0.5, 1.0] {
            for alpha in [1.0, 2.0] {
                let r = theorem42_harness(&v, &Theorem42Params::new(eta, alpha, 5.0), &samples).map_err(err)?;
                ensure(r.passed() && r.content_sum < r.paper_bound, || {
                    format!("measure {i}, eta {eta}, alpha {alpha}: {:?}", r.counts)
                })?;
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} exact runs with 2000 samples each"))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let quad = SphereQuadrature::shared_default(2).map_err(err)?;
    let log_norm = FnPotential::new(2, "log|z|", |z: &CPoint| LogValue::ln(z.norm())).oracle().map_err(err)?;
    let log_max = FnPotential::new(2, "max log|z_i|", |z: &CPoint| {
        let c = z.coords();
        LogValue::ln(c[0].norm().max(c[1].norm()))
    })
    .oracle()
    .map_err(err)?;
    let samples = uniform_ball_samples(505, 2, 1.0, 48);
    let mut notes = Vec::new();
    for (name, v) in [("log|z|", log_norm), ("max log|z_i|", log_max)] {
        let v = normalize_log_class(&v, &quad).map_err(err)?;
        let r = theorem42_harness(&v, &Theorem42Params::new(1.0, 2.0, 1.0), &samples).map_err(err)?;
        ensure(r.verdict == Verdict::Pass, || format!("{name}: {:?} {:?}", r.counts, r.constants))?;
        notes.push(format!("{name} content {:.3e} <= {}", r.content_sum, r.paper_bound));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 300.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{}, lower-bound slack 1e-2, {secs:.1} s", notes.join("; ")))
}

fn criterion_6() -> Outcome {
    let q1 = SphereQuadrature::shared_default(1).map_err(err)?;
    let points = uniform_ball_samples(606, 1, 1.0, 5);
    let mut worst1 = 0.0f64;
    for mu in log_class_measure_battery(606, 100, 20, 5.0) {
        let v = discrete_potential(&mu).map_err(err)?;
        for z in &points {
            worst1 = worst1.max(representation_residual(&v, z, &q1, 20.0).map_err(err)?);
        }
    }
    ensure(worst1 <= 1e-8, || format!("n = 1 representation residual {worst1:e}"))?;
    let q2 = SphereQuadrature::shared(2, 200_000, 606).map_err(err)?;
    let radial: Vec<(&str, PshOracle)> = vec![
        ("log|z|", FnPotential::new(2, "log|z|", |z: &CPoint| LogValue::ln(z.norm())).oracle().map_err(err)?),
        (
            "log(|z|^2 + 0.01) / 2",
            FnPotential::new(2, "soft", |z: &CPoint| LogValue::Finite(0.5 * (z.norm_sqr() + 0.01).ln()))
                .oracle()
                .map_err(err)?,
        ),
        (
            "max(log|z|, log 0.5)",
            FnPotential::new(2, "kink", |z: &CPoint| LogValue::Finite(z.norm().max(0.5).ln())).oracle().map_err(err)?,
        ),
    ];
    let mut worst2 = 0.0f64;
    for (name, v) in &radial {
        let v = v.clone().with_quadrature(q2.clone()).map_err(err)?;
        let res = poisson_jensen_residual(&v, 0.1, 1.0, &q2).map_err(err)?;
        ensure(res <= 5e-3, || format!("{name}: residual {res:e}"))?;
        worst2 = worst2.max(res);
    }
    Ok(format!("n = 1 max residual {worst1:.1e}; n = 2 max residual {worst2:.1e} with 2e5 nodes"))
}

/// Pairs for the involution check. Near the sphere the round trip is limited by conditioning,
/// `eps |1 - <w, z>|^2 / (1 - |z|^2)`, so the absolute 1e-12 is asserted on `B_0.99` and the
/// whole ball is held to 8 times the conditioning bound.
const INVOLUTION_RADIUS: f64 = 0.99;

fn criterion_7() -> Outcome {
    let mut worst_inv = 0.0f64;
    let mut worst_rel = 0.0f64;
    for n in 1..=3 {
        for (r, seed) in [(INVOLUTION_RADIUS, 700), (1.0, 750)] {
            let zs = uniform_ball_samples(seed + n as u64, n, r, 10_000);
            let ws = uniform_ball_samples(seed + 100 + n as u64, n, r, 10_000);
            for (z, w) in zs.iter().zip(&ws) {
                let back = moebius_apply(z, &moebius_apply(z, w).map_err(err)?).map_err(err)?;
                let e = back.dist(w);
                if r < 1.0 {
                    worst_inv = worst_inv.max(e);
                } else {
                    let cond = (1.0 - z.inner(w)).norm_sqr() / (1.0 - z.norm_sqr());
                    worst_rel = worst_rel.max(e / (f64::EPSILON * cond.max(1.0)));
                }
            }
        }
    }
    ensure(worst_inv <= 1e-12, || format!("involution error {worst_inv:e} on B_{INVOLUTION_RADIUS}"))?;
    ensure(worst_rel <= 8.0, || format!("involution error {worst_rel} times the conditioning bound"))?;
    let mut norm_err = [0.0f64; 2];
    for n in 1..=2 {
        let quad = SphereQuadrature::shared_default(n).map_err(err)?;
        for z in uniform_ball_samples(710 + n as u64, n, 0.5, 20) {
            let mut total = 0.0;
            for zeta in quad.nodes() {
                total += poisson_szego(&z, &zeta).map_err(err)?;
            }
            let e = (total * quad.weight() - 1.0).abs();
            norm_err[n - 1] = norm_err[n - 1].max(e);
        }
    }
    ensure(norm_err[0] <= 1e-10 && norm_err[1] <= 5e-3, || format!("normalization errors {norm_err:?}"))?;
    let mut worst_ratio = 0.0f64;
    for rho in [0.3, 0.5, 0.9] {
        for n in 1..=2 {
            let kappa = kappa_constant(rho, n).map_err(err)?;
            let zs = uniform_ball_samples(720 + n as u64, n, rho, 2000);
            let mut rng = ChaCha8Rng::seed_from_u64(730 + n as u64);
            for z in &zs {
                let zeta = lemlab_core::sampling::uniform_sphere(&mut rng, n, 1.0);
                let ratio = poisson_szego(z, &zeta).map_err(err)? / kappa;
                worst_ratio = worst_ratio.max(ratio);
            }
        }
    }
    ensure(worst_ratio <= 1.0 + 1e-12, || format!("kernel exceeds kappa by ratio {worst_ratio}"))?;
    Ok(format!(
        "involution {worst_inv:.1e} on B_0.99, {worst_rel:.2} x conditioning on B_1; normalization {:.1e} / {:.1e}; max P / kappa = {worst_ratio:.3}",
        norm_err[0], norm_err[1]
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut worst = f64::NEG_INFINITY;
    for k in 0..1000 {
        let n = 1 + k % 2;
        let sigma: f64 = rng.random_range(0.01..0.99);
        let tau: f64 = rng.random_range(0.01..0.99);
        let z = lemlab_core::sampling::uniform_ball(&mut rng, n, tau);
        let w = lemlab_core::sampling::uniform_ball(&mut rng, n, sigma);
        let d = invariant_distance(&z, &w).map_err(err)?;
        let bound = moebius_inclusion_radius(sigma, tau);
        worst = worst.max(d - bound);
        ensure(d <= bound + 1e-12, || format!("sigma {sigma}, tau {tau}: {d} > {bound}"))?;
        let ext = invariant_distance(&CPoint::c1_parts(tau, 0.0), &CPoint::c1_parts(-sigma, 0.0)).map_err(err)?;
        ensure((ext - bound).abs() <= 1e-3, || format!("collinear case {ext} vs {bound}"))?;
    }
    Ok(format!("1000 triples, max |Phi_z(w)| - bound = {worst:.2e}, collinear case saturates"))
}

fn criterion_9() -> Outcome {
    let samples = uniform_ball_samples(909, 1, 0.99, 400);
    let mut runs = 0;
    for (i, spec) in green_spec_battery(909, 100, 6, 0.9, 1.0).iter().enumerate() {
        for eta in [0.1, 0.3] {
            for alpha in [1.0, 2.0] {
                let p = Lemma51Params::new(0.5, eta, alpha);
                for (name, r) in [
                    ("lemma", lemma51_harness(spec, &p, &samples).map_err(err)?),
                    ("prop", prop52_harness(spec, &p, &samples).map_err(err)?),
                ] {
                    ensure(r.passed() && r.content_sum < r.paper_bound, || {
                        format!("{name} spec {i}, eta {eta}, alpha {alpha}: {:?}", r.counts)
                    })?;
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{runs} exact invariant runs, zero violations"))
}

fn three_circle_battery() -> Vec<lemlab_core::potentials::AtomicMeasure> {
    log_poly_battery(1010, 50, 8, 1.5)
}

fn criterion_10() -> Outcome {
    let (sigma, tau) = (0.1, 0.5);
    let nu_st = nu_constant(sigma, tau).map_err(err)?;
    let mut worst_fraction = 1.0f64;
    let mut worst_lelong = f64::NEG_INFINITY;
    for (i, mu) in three_circle_battery().iter().enumerate() {
        let v = discrete_potential(mu).map_err(err)?;
        let samples = uniform_ball_samples(1010 + i as u64, 1, tau, 10_000);
        let eta0 = three_circle_eta0(&v, sigma, tau, 1.1 * nu_st, 1.0, &samples).map_err(err)?;
        let p = ThreeCircleParams::new(sigma, tau, 1.1 * nu_st, 0.5 * eta0, 1.0, 1.0);
        let r = three_circle_min_harness(&v, &p, &samples).map_err(err)?;
        ensure(r.passed(), || format!("poly {i}: {:?} {:?}", r.counts, r.constants))?;
        ensure(r.constants["invariant_content"] < r.constants["invariant_bound"], || format!("poly {i}: content"))?;
        let good = r.counts["good"] as f64;
        if good > 0.0 {
            worst_fraction = worst_fraction.min(1.0 - r.counts["lower_bound_violations"] as f64 / good);
        }
        let (s_sigma, d) = (r.constants["sup_sigma"], r.constants["sup_one"] - r.constants["sup_sigma"]);
        let u = v.affine_pullback(1.0, 1.0 / d, -s_sigma / d).map_err(err)?;
        for a in mu.atoms.iter().filter(|a| a.location.norm() <= tau) {
            let b = lelong_bound_check(&u, sigma, tau, &a.location).map_err(err)?;
            worst_lelong = worst_lelong.max(b.estimate - b.nu);
            ensure(b.within_bound, || format!("poly {i}: Lelong number {} > nu {}", b.estimate, b.nu))?;
        }
    }
    Ok(format!(
        "50 potentials, min good fraction {worst_fraction:.4}, max Lelong estimate - nu = {worst_lelong:.3}"
    ))
}

fn criterion_11() -> Outcome {
    let mut violations = 0;
    for (i, mu) in three_circle_battery().iter().enumerate() {
        let v = discrete_potential(mu).map_err(err)?;
        let samples = uniform_ball_samples(1010 + i as u64, 1, 0.5, 10_000);
        let r = three_circle_max_check(&v, 0.1, 0.5, 1.0, &samples).map_err(err)?;
        violations += r.counts.get("violations").copied().unwrap_or(0);
        ensure(r.passed(), || format!("poly {i}: {:?}", r.constants))?;
    }
    ensure(violations == 0, || format!("{violations} violations"))?;
    Ok("50 potentials x 10^4 samples, zero violations".into())
}

fn criterion_12() -> Outcome {
    let circle: Vec<Complex64> =
        (0..1024).map(|k| Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 1024.0)).collect();
    let c = capacity_1d(&PlaneSet::Cloud { points: circle }).map_err(err)?;
    ensure((0.95..=1.05).contains(&c.value), || format!("circle estimate {}", c.value))?;
    let segment: Vec<Complex64> = (0..=2048).map(|k| Complex64::new(-2.0 + 4.0 * k as f64 / 2048.0, 0.0)).collect();
    let s = capacity_1d(&PlaneSet::Cloud { points: segment }).map_err(err)?;
    ensure((0.93..=1.07).contains(&s.value), || format!("segment estimate {}", s.value))?;
    for alpha in [0.5, 1.0] {
        for (set, res) in [
            (PlaneSet::Disc { center: Complex64::default(), radius: 0.1 }, 101),
            (PlaneSet::Segment { a: Complex64::new(-0.2, 0.0), b: Complex64::new(0.2, 0.0) }, 201),
        ] {
            let r = corollary44_check(&set, alpha, res).map_err(err)?;
            ensure(r.verdict == Verdict::Pass, || format!("{set:?}, alpha {alpha}: {:?}", r.verdict))?;
        }
    }
    Ok(format!("circle {:.4}, segment {:.4} (Fekete, 64 points), comparisons pass", c.value, s.value))
}

fn replay_configs() -> Vec<RunConfig> {
    let quad = json!({"factors": [{"root": [1.0, 0.0], "multiplicity": 1}, {"root": [-1.0, 0.0], "multiplicity": 1}]});
    let unit = json!({"factors": [{"root": [2.0, 0.0], "multiplicity": 1}, {"root": [0.0, -3.0], "multiplicity": 1}],
                      "lead": [0.0, 0.16666666666666666]});
    let measure = json!({"kind": "measure", "measure": {"dimension": 1, "atoms": [
        {"location": [[0.3, 0.1]], "weight": 0.5}, {"location": [[-1.0, 2.0]], "weight": 0.5}]}});
    let cor64 = json!({"kind": "measure", "measure": {"dimension": 1, "atoms": [
        {"location": [[1.0, 0.0]], "weight": 1.0}, {"location": [[-1.0, 0.0]], "weight": 1.0}]}});
    let green = json!({"dimension": 1, "atoms": [{"location": [[0.2, 0.3]], "weight": 0.6}]});
    let disc = json!({"kind": "disc", "radius": 0.1});
    let seg = json!({"kind": "segment", "a": [-0.2, 0.0], "b": [0.2, 0.0]});
    let mk = |command: Command, doc: Option<serde_json::Value>, f: &dyn Fn(&mut RunConfig)| {
        let mut c = RunConfig::new(command, 17);
        c.input_doc = doc;
        f(&mut c);
        c
    };
    vec![
        mk(Command::Cartan, Some(quad.clone()), &|c| c.params.eps = Some(0.1)),
        mk(Command::Minmod, Some(unit), &|c| c.params.eta = Some(0.1)),
        mk(Command::Thm42, Some(measure.clone()), &|c| c.params.eta = Some(1.0)),
        mk(Command::Cor43, Some(measure.clone()), &|c| c.params.eps = Some(0.05)),
        mk(Command::Capacity, Some(seg.clone()), &|_| {}),
        mk(Command::Cor44, Some(disc), &|_| {}),
        mk(Command::Constants, None, &|c| {
            c.params.eta = Some(0.1);
            c.params.sigma = Some(0.1);
            c.params.tau = Some(0.5);
        }),
        mk(Command::ThreeCircleMax, Some(measure.clone()), &|c| {
            c.params.sigma = Some(0.1);
            c.params.tau = Some(0.5);
            c.samples = Some(2000);
        }),
        mk(Command::LelongBound, Some(measure.clone()), &|c| {
            c.params.sigma = Some(0.1);
            c.params.tau = Some(0.5);
        }),
        mk(Command::ThreeCircleMin, Some(measure.clone()), &|c| {
            c.params.sigma = Some(0.1);
            c.params.tau = Some(0.5);
            c.samples = Some(2000);
        }),
        mk(Command::Cor64, Some(cor64), &|c| c.params.eta = Some(0.1)),
        mk(Command::Essential, Some(measure), &|c| c.params.eps = Some(0.01)),
        mk(Command::Lemma51, Some(green.clone()), &|c| c.params.eta = Some(0.1)),
        mk(Command::Prop52, Some(green.clone()), &|c| c.params.eta = Some(0.3)),
        mk(Command::Thm53, Some(json!({"kind": "green", "spec": green})), &|c| c.params.eta = Some(0.1)),
    ]
}

fn criterion_13() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let configs = replay_configs();
    let covered: std::collections::HashSet<Command> = configs.iter().map(|c| c.command).collect();
    ensure(covered.len() == Command::ALL.len(), || "not every subcommand is exercised".into())?;
    for mut cfg in configs {
        let name = cfg.command.name();
        cfg.out = Some(dir.path().join(name));
        let first = run(&cfg).map_err(|e| format!("{name}: {e}"))?;
        ensure(first.payload.verdict != Verdict::Fail, || format!("{name}: run failed"))?;
        let again = replay(&dir.path().join(name).join(lemlab::REPORT_FILE)).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            lemlab::payload_bytes(&first).map_err(err)? == lemlab::payload_bytes(&again).map_err(err)?,
            || format!("{name}: payload differs"),
        )?;
    }
    Ok(format!("{} subcommands replayed with byte-identical payloads", Command::ALL.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("Cartan-Boutroux discs", criterion_1),
        ("Cartan-Boutroux alpha variant", criterion_2),
        ("minimum modulus", criterion_3),
        ("logarithmic class lower bound, n = 1", criterion_4),
        ("logarithmic class lower bound, n = 2", criterion_5),
        ("Poisson-Jensen residuals", criterion_6),
        ("ball geometry", criterion_7),
        ("Moebius inclusion", criterion_8),
        ("Green potential lemmas", criterion_9),
        ("three-circle minimum", criterion_10),
        ("three-circle maximum", criterion_11),
        ("capacity", criterion_12),
        ("replay determinism", criterion_13),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let id = (k + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {id}: {name} ({detail}) [{secs:.1} s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id}: {name} ({why}) [{secs:.1} s]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

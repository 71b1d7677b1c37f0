//! Harnesses for the unit-ball lower bounds: the Green-potential lemma, its Cegrell-class
//! corollary for atomic potentials, and the Poisson–Szegő plus Green-potential theorem.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::green::{
    boundary_mean, green_oracle, invariant_theta, kappa_constant, poisson_szego_integral, GreenPotentialSpec,
    InvariantTheta,
};
use super::moebius::invariant_distance;
use crate::cover::{Metric, MetricBall};
use crate::error::{domain, Result};
use crate::exclusion::{exclusion_cover, ExclusionParams, ExclusionReport, DEFAULT_SCAN_DEPTH};
use crate::point::CPoint;
use crate::potentials::{riesz_mass_grid, Atom, FnPotential, PshOracle, SphereQuadrature};
use crate::report::{HarnessReport, Verdict};
use crate::sampling::uniform_ball;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CnEstimate {
    pub dimension: usize,
    /// Twice the largest observed ratio.
    pub value: f64,
    pub max_ratio: f64,
    pub ratios: Vec<f64>,
    pub seed: u64,
}

/// Empirical constant in `theta_V(z, r) <= c_n r^(2 - 2n) mu_V(omega_z(r))`, `r <= 1/3`.
///
/// In C^1 the battery uses random atomic Green potentials, where both sides are exact
/// counting sums. In C^2 it uses mollified logarithms `log(|zeta - a|^2 + delta^2) / 2`,
/// with the invariant mass from sphere means and the Riesz mass from a grid Laplacian.
/// The reported value is twice the largest ratio. Results are memoised per `(n, seed)`.
pub fn estimate_c_n(n: usize, seed: u64) -> Result<CnEstimate> {
    static MEMO: OnceLock<Mutex<HashMap<(usize, u64), CnEstimate>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(e) = memo.lock().expect("c_n memo poisoned").get(&(n, seed)) {
        return Ok(e.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ratios = match n {
        1 => c1_battery(&mut rng)?,
        2 => c2_battery(&mut rng)?,
        _ => return Err(domain!("c_n is only estimated for n in {{1, 2}}; pass it explicitly for n = {n}")),
    };
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    let est = CnEstimate { dimension: n, value: 2.0 * max_ratio, max_ratio, ratios, seed };
    memo.lock().expect("c_n memo poisoned").insert((n, seed), est.clone());
    Ok(est)
}

fn c1_battery(rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let mut ratios = Vec::new();
    for _ in 0..200 {
        let k = rng.random_range(1..=6);
        let atoms: Vec<Atom> = (0..k)
            .map(|_| Atom { location: uniform_ball(rng, 1, 0.9), weight: rng.random_range(0.05..1.0) })
            .collect();
        let spec = GreenPotentialSpec::new(1, atoms)?;
        let v = green_oracle(&spec)?;
        let z = uniform_ball(rng, 1, 0.9);
        let r = rng.random_range(0.01..1.0 / 3.0);
        let theta = invariant_theta(&v, &z, r, v.quadrature())?;
        let mut mass = 0.0;
        for a in &spec.atoms {
            if invariant_distance(&z, &a.location)? <= r {
                mass += a.weight;
            }
        }
        if mass > 0.0 {
            ratios.push(theta / mass);
        }
    }
    Ok(ratios)
}

fn c2_battery(rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let quad = SphereQuadrature::shared(2, 20_000, 7)?;
    let mut ratios = Vec::new();
    for _ in 0..6 {
        let a = uniform_ball(rng, 2, 0.5);
        let delta = rng.random_range(0.1..0.3);
        let d2 = delta * delta;
        let v = FnPotential::new(2, "mollified log", move |z: &CPoint| {
            crate::point::LogValue::Finite(0.5 * (z.dist(&a).powi(2) + d2).ln())
        })
        .oracle()?
        .with_quadrature(quad.clone())?;
        let z = uniform_ball(rng, 2, 0.5);
        let r = rng.random_range(0.15..1.0 / 3.0);
        let theta = invariant_theta(&v, &z, r, &quad)?;
        let ball = MetricBall::new(z, r, Metric::Invariant)?;
        let mass = riesz_mass_grid(&v, &ball, 20)?;
        if mass > 0.0 {
            ratios.push(theta * r * r / mass);
        }
    }
    Ok(ratios)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma51Params {
    pub s: f64,
    pub eta: f64,
    pub alpha: f64,
    /// Overrides the empirical constant.
    pub c_n: Option<f64>,
    pub theta_tol: f64,
    pub lower_tol: f64,
    pub scan_depth: u32,
    pub seed: u64,
}

impl Lemma51Params {
    pub fn new(s: f64, eta: f64, alpha: f64) -> Self {
        Lemma51Params {
            s,
            eta,
            alpha,
            c_n: None,
            theta_tol: 0.0,
            lower_tol: 1e-12,
            scan_depth: DEFAULT_SCAN_DEPTH,
            seed: crate::potentials::DEFAULT_SEED,
        }
    }
}

pub(crate) fn resolve_c_n(n: usize, over: Option<f64>, seed: u64) -> Result<f64> {
    match over {
        Some(c) if c > 0.0 => Ok(c),
        Some(c) => Err(domain!("c_n must be positive, got {c}")),
        None => Ok(estimate_c_n(n, seed)?.value),
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(domain!("alpha must lie in (0,2], got {alpha}"));
    }
    Ok(())
}

/// Riesz mass of the unit ball; exact for oracles that know their masses.
pub(crate) fn unit_ball_mass(v: &PshOracle) -> Result<f64> {
    let n = v.dim();
    if let Some(m) = v.inner().exact_theta(&CPoint::origin(n), 1.0) {
        if n == 1 {
            return Ok(m);
        }
    }
    v.mass(&MetricBall::euclidean(CPoint::origin(n), 1.0)?)
}

pub(crate) struct LemmaRun {
    pub(crate) exclusion: ExclusionReport,
    pub(crate) mu: f64,
    pub(crate) c_n: f64,
    pub(crate) amplitude: f64,
    /// `(z, V(z), theta(z, s))` for every good sample.
    pub(crate) good: Vec<(CPoint, Option<f64>, f64)>,
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn run_lemma(v: &PshOracle, mu: f64, c_n: f64, s: f64, eta: f64, alpha: f64, theta_tol: f64, depth: u32, samples: &[CPoint]) -> Result<LemmaRun> {
    let eps = eta / 3.0;
    let amplitude = (alpha * c_n * mu * eps.powf(-alpha)).max(f64::MIN_POSITIVE);
    let params = ExclusionParams::new(eps, alpha, amplitude, Metric::Invariant)?
        .with_theta_tol(theta_tol)
        .with_scan_depth(depth);
    let oracle = InvariantTheta { oracle: v };
    let exclusion = exclusion_cover(&oracle, samples, &params, mu, 1.0)?;
    let mut good = Vec::with_capacity(exclusion.good_points.len());
    for z in &exclusion.good_points {
        let th = if s >= 1.0 { one_theta(v, z)? } else { invariant_theta(v, z, s, v.quadrature())? };
        good.push((z.clone(), v.eval(z)?.finite(), th));
    }
    Ok(LemmaRun { exclusion, mu, c_n, amplitude, good })
}

/// `theta_V(z, 1)`: the whole invariant mass, approached from just below 1.
fn one_theta(v: &PshOracle, z: &CPoint) -> Result<f64> {
    invariant_theta(v, z, 1.0 - 1e-9, v.quadrature())
}

fn base_report(name: &str, v: &PshOracle, run: &LemmaRun, seed: Option<u64>) -> HarnessReport {
    let mut rep = HarnessReport::new(name);
    rep.constant("c_n", run.c_n);
    rep.constant("mu_B", run.mu);
    rep.constant("amplitude", run.amplitude);
    rep.count("samples", run.exclusion.good_count() + run.exclusion.bad_count());
    rep.count("good", run.exclusion.good_count());
    rep.count("bad", run.exclusion.bad_count());
    rep.count("selected", run.exclusion.selected_disjoint.len());
    rep.content_sum = run.exclusion.content_sum;
    rep.paper_bound = run.exclusion.paper_bound;
    rep.add_provenance(v.provenance());
    rep.seed = seed;
    rep
}

fn check_lemma_domain(s: f64, eta: f64, alpha: f64, s_max_inclusive: bool) -> Result<()> {
    let s_ok = if s_max_inclusive { s > 0.0 && s <= 1.0 } else { s > 0.0 && s < 1.0 };
    if !s_ok {
        return Err(domain!("s must lie in (0,1), got {s}"));
    }
    if !(eta > 0.0 && eta < (3.0 * s).min(1.0)) {
        return Err(domain!("eta must lie in (0, min(3s, 1)), got eta = {eta}, s = {s}"));
    }
    check_alpha(alpha)
}

/// Green-potential lower bound: at good samples
/// `phi(z) >= -theta(z, s) log(3 / eta) - c_n mu(B) log(e / s)`, with the exceptional set
/// covered by pseudo-balls of content below `9^(n-1) eta^alpha / alpha`.
pub fn lemma51_harness(spec: &GreenPotentialSpec, p: &Lemma51Params, samples: &[CPoint]) -> Result<HarnessReport> {
    check_lemma_domain(p.s, p.eta, p.alpha, false)?;
    let v = green_oracle(spec)?;
    let c_n = resolve_c_n(spec.dimension, p.c_n, p.seed)?;
    let mu = if spec.atoms.is_empty() { 0.0 } else { unit_ball_mass(&v)? };
    let run = run_lemma(&v, mu, c_n, p.s, p.eta, p.alpha, p.theta_tol, p.scan_depth, samples)?;
    let log3 = (3.0 / p.eta).ln();
    let tail = c_n * mu * (std::f64::consts::E / p.s).ln();
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for (_, val, th) in &run.good {
        let lower = -th * log3 - tail;
        let margin = val.map_or(f64::NEG_INFINITY, |x| x - lower);
        worst = worst.min(margin);
        if margin < -p.lower_tol {
            violations += 1;
        }
    }
    let mut rep = base_report("lemma51", &v, &run, Some(p.seed));
    rep = rep.param("s", p.s).param("eta", p.eta).param("alpha", p.alpha);
    rep.count("lower_bound_violations", violations);
    if worst.is_finite() {
        rep.constant("worst_margin", worst);
    }
    rep.verdict = Verdict::from_bool(run.exclusion.pass && violations == 0);
    rep.exclusion = Some(run.exclusion);
    Ok(rep)
}

/// Atomic Cegrell-class bound: with total weight at most 1, good samples satisfy
/// `phi(z) >= -log(C / eta)` with the emitted `C = 3 exp(c_n mu(B))`.
pub fn prop52_harness(spec: &GreenPotentialSpec, p: &Lemma51Params, samples: &[CPoint]) -> Result<HarnessReport> {
    if spec.total_weight() > 1.0 + 1e-12 {
        return Err(domain!("total pole weight must be at most 1, got {}", spec.total_weight()));
    }
    check_lemma_domain(1.0, p.eta, p.alpha, true)?;
    let v = green_oracle(spec)?;
    let c_n = resolve_c_n(spec.dimension, p.c_n, p.seed)?;
    let mu = if spec.atoms.is_empty() { 0.0 } else { unit_ball_mass(&v)? };
    let run = run_lemma(&v, mu, c_n, 1.0, p.eta, p.alpha, p.theta_tol, p.scan_depth, samples)?;
    let big_c = 3.0 * (c_n * mu).exp();
    let lower = -(big_c / p.eta).ln();
    let mut violations = 0;
    let mut theta_one_over = 0;
    for (_, val, th) in &run.good {
        if val.map_or(true, |x| x < lower - p.lower_tol) {
            violations += 1;
        }
        if *th > 1.0 + 1e-6 + p.theta_tol {
            theta_one_over += 1;
        }
    }
    let mut rep = base_report("prop52", &v, &run, Some(p.seed));
    rep = rep.param("eta", p.eta).param("alpha", p.alpha).param("s", 1.0);
    rep.constant("C", big_c);
    rep.constant("lower_bound", lower);
    rep.count("lower_bound_violations", violations);
    rep.count("theta_one_above_one", theta_one_over);
    rep.verdict = Verdict::from_bool(run.exclusion.pass && violations == 0);
    rep.exclusion = Some(run.exclusion);
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem53Params {
    pub rho: f64,
    pub s: f64,
    pub eta: f64,
    pub alpha: f64,
    pub c_n: Option<f64>,
    pub theta_tol: f64,
    pub lower_tol: f64,
    pub scan_depth: u32,
    pub seed: u64,
}

impl Theorem53Params {
    pub fn new(rho: f64, s: f64, eta: f64, alpha: f64) -> Self {
        Theorem53Params {
            rho,
            s,
            eta,
            alpha,
            c_n: None,
            theta_tol: 0.0,
            lower_tol: 1e-9,
            scan_depth: DEFAULT_SCAN_DEPTH,
            seed: crate::potentials::DEFAULT_SEED,
        }
    }
}

/// Lower bound for `V <= 0` psh near the closed ball, at good samples of `B_rho`:
/// `V(z) >= kappa_n(rho) int V d sigma - theta_V(z, s) log(3 / eta) - c_n mu_V(B) log(e / s)`.
///
/// Also checks `P_V(z) >= kappa_n(rho) int V d sigma` at every sample.
pub fn theorem53_harness(v: &PshOracle, p: &Theorem53Params, samples: &[CPoint]) -> Result<HarnessReport> {
    if !(p.s > 0.0 && p.s < 1.0) {
        return Err(domain!("s must lie in (0,1), got {}", p.s));
    }
    if !(p.eta > 0.0 && p.eta < p.s.min(1.0 / 3.0)) {
        return Err(domain!("eta must lie in (0, min(s, 1/3)), got eta = {}, s = {}", p.eta, p.s));
    }
    check_alpha(p.alpha)?;
    let n = v.dim();
    let kappa = kappa_constant(p.rho, n)?;
    for z in samples {
        z.check_dim(n)?;
        if z.norm() > p.rho {
            return Err(domain!("sample {z} lies outside B_rho, rho = {}", p.rho));
        }
    }
    let quad = v.quadrature().clone();
    for z in samples.iter().cloned().chain(quad.nodes()) {
        if let Some(x) = v.eval(&z)?.finite() {
            if x > 1e-12 {
                return Err(domain!("V must be <= 0 on the ball, but V({z}) = {x}"));
            }
        }
    }
    let bmean = boundary_mean(v, &quad)?;
    let c_n = resolve_c_n(n, p.c_n, p.seed)?;
    let mu = unit_ball_mass(v)?.max(0.0);
    let run = run_lemma(v, mu, c_n, p.s, p.eta, p.alpha, p.theta_tol, p.scan_depth, samples)?;

    let mut pv_violations = 0;
    for z in samples {
        let pv = poisson_szego_integral(v, z, &quad)?;
        if pv < kappa * bmean - 1e-12 * (1.0 + kappa * bmean.abs()) {
            pv_violations += 1;
        }
    }
    let log3 = (3.0 / p.eta).ln();
    let tail = c_n * mu * (std::f64::consts::E / p.s).ln();
    let mut violations = 0;
    for (_, val, th) in &run.good {
        let lower = kappa * bmean - th * log3 - tail;
        if val.map_or(true, |x| x < lower - p.lower_tol) {
            violations += 1;
        }
    }
    let mut rep = base_report("thm53", v, &run, Some(p.seed));
    rep = rep.param("rho", p.rho).param("s", p.s).param("eta", p.eta).param("alpha", p.alpha);
    rep.constant("kappa", kappa);
    rep.constant("boundary_mean", bmean);
    rep.count("poisson_violations", pv_violations);
    rep.count("lower_bound_violations", violations);
    rep.verdict = Verdict::from_bool(run.exclusion.pass && violations == 0 && pv_violations == 0);
    rep.exclusion = Some(run.exclusion);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::LogValue;
    use crate::sampling::uniform_ball_samples;

    fn c1(x: f64) -> CPoint {
        CPoint::c1_parts(x, 0.0)
    }

    #[test]
    fn c1_estimate_is_two() {
        let e = estimate_c_n(1, 42).unwrap();
        assert!((e.value - 2.0).abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn single_pole_lemma_with_unit_constant() {
        let spec = GreenPotentialSpec::new(1, vec![Atom { location: c1(0.0), weight: 1.0 }]).unwrap();
        let mut p = Lemma51Params::new(0.5, 0.3, 1.0);
        p.c_n = Some(1.0);
        let mut samples = uniform_ball_samples(5, 1, 0.95, 500);
        samples.push(c1(0.05));
        samples.push(c1(0.099));
        samples.push(c1(0.101));
        let rep = lemma51_harness(&spec, &p, &samples).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let ex = rep.exclusion.unwrap();
        for b in &ex.bad_points {
            assert!(b.point.norm() < 0.1);
        }
        for g in &ex.good_points {
            assert!(g.norm() >= 0.1);
        }
    }

    #[test]
    fn empty_spec_is_vacuous() {
        let spec = GreenPotentialSpec::new(1, vec![]).unwrap();
        let samples = uniform_ball_samples(1, 1, 0.9, 50);
        let rep = lemma51_harness(&spec, &Lemma51Params::new(0.5, 0.3, 1.0), &samples).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.counts["bad"], 0);
        let rep = prop52_harness(&spec, &Lemma51Params::new(1.0, 0.3, 1.0), &samples).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn prop52_rejects_heavy_specs() {
        let spec = GreenPotentialSpec::new(1, vec![Atom { location: c1(0.0), weight: 1.5 }]).unwrap();
        assert!(prop52_harness(&spec, &Lemma51Params::new(1.0, 0.3, 1.0), &[c1(0.5)]).is_err());
    }

    #[test]
    fn lemma_domain_errors() {
        let spec = GreenPotentialSpec::new(1, vec![]).unwrap();
        assert!(lemma51_harness(&spec, &Lemma51Params::new(0.1, 0.5, 1.0), &[]).is_err());
        assert!(lemma51_harness(&spec, &Lemma51Params::new(1.2, 0.5, 1.0), &[]).is_err());
    }

    #[test]
    fn theorem53_on_zero_and_pole() {
        let zero = FnPotential::new(1, "0", |_| LogValue::Finite(0.0)).oracle().unwrap();
        let samples = uniform_ball_samples(3, 1, 0.5, 100);
        let rep = theorem53_harness(&zero, &Theorem53Params::new(0.5, 0.5, 0.2, 1.0), &samples).unwrap();
        assert!(rep.passed(), "{rep:?}");

        let spec = GreenPotentialSpec::new(1, vec![Atom { location: c1(0.2), weight: 1.0 }]).unwrap();
        let v = green_oracle(&spec).unwrap();
        let rep = theorem53_harness(&v, &Theorem53Params::new(0.5, 0.5, 0.2, 1.0), &samples).unwrap();
        assert!(rep.passed(), "{rep:?}");

        let pos = FnPotential::new(1, "1", |_| LogValue::Finite(1.0)).oracle().unwrap();
        assert!(theorem53_harness(&pos, &Theorem53Params::new(0.5, 0.5, 0.2, 1.0), &samples).is_err());
    }
}

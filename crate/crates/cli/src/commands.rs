//! One function per subcommand: read the input, call the harness, collect artifacts.

use lemlab_core::ball::{
    lemma51_harness, prop52_harness, theorem53_harness, Lemma51Params, Theorem53Params,
};
use lemlab_core::principles::{
    capacity_1d, cartan_cover, cartan_groups, check_lemniscate_cover, corollary43_harness, corollary44_check,
    corollary64_harness, essential_lower_bound, h_constant, lelong_bound_check, min_modulus_1d,
    moebius_inclusion_radius, nu_constant, rho_constant, sphere_sup, theorem42_harness, three_circle_eta0,
    three_circle_max_check, three_circle_min_harness, CapacityMethod, Corollary43Params, Theorem42Params,
    ThreeCircleParams,
};
use lemlab_core::potentials::DEFAULT_SEED;
use lemlab_core::sampling::{disc_grid, uniform_ball_samples};
use lemlab_core::{CPoint, HarnessReport, PshOracle, SphereQuadrature, Verdict};
use num_complex::Complex64;

use crate::artifacts::{cover_svg, lemniscate_csv, series_csv, square_grid, Artifact, GridRow};
use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::input;

/// Radius of the sample ball for the unit-ball lemmas; the harnesses need the open ball.
const LEMMA_SAMPLE_RADIUS: f64 = 0.99;
/// Side of the lemniscate CSV grid; the verification grid itself is `--grid`.
const CSV_GRID: usize = 200;

pub struct Outcome {
    pub payload: HarnessReport,
    pub artifacts: Vec<Artifact>,
}

fn required(cfg: &RunConfig, value: Option<f64>, what: &'static str) -> CliResult<f64> {
    value.ok_or(CliError::MissingParam { command: cfg.command.name(), what })
}

fn with_quad(cfg: &RunConfig, v: PshOracle) -> CliResult<PshOracle> {
    match cfg.quad_nodes {
        Some(nodes) => {
            let quad = SphereQuadrature::shared(v.dim(), nodes, DEFAULT_SEED)?;
            Ok(v.with_quadrature(quad)?)
        }
        None => Ok(v),
    }
}

fn potential(cfg: &RunConfig) -> CliResult<(input::PotentialSpec, PshOracle)> {
    let spec = input::potential(cfg.input_doc.as_ref())?;
    let v = with_quad(cfg, spec.oracle()?)?;
    Ok((spec, v))
}

/// Seeded uniform samples of `B_r`; `n1` and `nk` are the default counts in C^1 and beyond.
fn samples(cfg: &RunConfig, n: usize, r: f64, n1: usize, nk: usize) -> Vec<CPoint> {
    let count = cfg.samples.unwrap_or(if n == 1 { n1 } else { nk });
    uniform_ball_samples(cfg.seed, n, r, count)
}

fn exclusion_svg(rep: &HarnessReport) -> Vec<Artifact> {
    match &rep.exclusion {
        Some(ex) => {
            let bad: Vec<CPoint> = ex.bad_points.iter().map(|b| b.point.clone()).collect();
            vec![Artifact::new("cover.svg", cover_svg(&ex.expanded_cover, &bad))]
        }
        None => Vec::new(),
    }
}

pub fn execute(cfg: &RunConfig) -> CliResult<Outcome> {
    let p = &cfg.params;
    let doc = cfg.input_doc.as_ref();
    let mut artifacts = Vec::new();
    let mut rep = match cfg.command {
        Command::Cartan => {
            let poly = input::factored_poly(doc)?;
            let eps = required(cfg, p.eps, "--eps")?;
            let alpha = p.alpha.unwrap_or(1.0);
            let roots = poly.roots();
            let groups = cartan_groups(&roots, eps, alpha)?;
            let cover = cartan_cover(&roots, eps, alpha)?;
            let reach = roots.iter().map(|a| a.norm()).fold(0.0, f64::max);
            let half_width = reach + 1.0 + cover.radii().fold(0.0, f64::max);
            let grid = cfg.grid.unwrap_or(512);
            let check = check_lemniscate_cover(&roots, eps, &cover, grid, half_width)?;
            let content = cover.content(alpha);
            let bound = std::f64::consts::E * (2.0 * eps).powf(alpha);
            let mut r = HarnessReport::new("cartan").param("eps", eps).param("alpha", alpha);
            r.count("degree", roots.len());
            r.count("discs", cover.len());
            r.count("checked", check.checked);
            r.count("inside_cover", check.inside_cover);
            r.count("violations", check.violations);
            r.constant("min_ratio", check.min_ratio);
            r.constant("half_width", half_width);
            r.constant("sum_radii", cover.content(1.0));
            r.series.insert("radii".into(), cover.radii().collect());
            r.series.insert("lambda".into(), groups.iter().map(|g| g.lambda as f64).collect());
            r.content_sum = content;
            r.paper_bound = bound;
            r.verdict = Verdict::from_bool(check.ok() && content <= bound * (1.0 + 1e-12));
            let d = roots.len().max(1) as f64;
            let rows: Vec<GridRow> = square_grid(CSV_GRID, half_width)
                .map(|(x, y)| {
                    let z = Complex64::new(x, y);
                    let value = roots.iter().map(|a| (z - a).norm().ln()).sum::<f64>() / d;
                    let in_exceptional = cover.balls.iter().any(|b| (z - b.center.z()).norm() <= b.radius);
                    GridRow { x, y, value, in_exceptional }
                })
                .collect();
            artifacts.push(Artifact::new("lemniscate.csv", lemniscate_csv(&rows)));
            let pts: Vec<CPoint> = roots.iter().map(|&a| CPoint::c1(a)).collect();
            artifacts.push(Artifact::new("cover.svg", cover_svg(&cover, &pts)));
            r
        }
        Command::Minmod => {
            let poly = input::factored_poly(doc)?;
            let eta = required(cfg, p.eta, "--eta")?;
            min_modulus_1d(&poly, p.radius.unwrap_or(1.0), eta, cfg.grid.unwrap_or(201))?
        }
        Command::Thm42 => {
            let (_, v) = potential(cfg)?;
            let eta = required(cfg, p.eta, "--eta")?;
            let radius = p.radius.unwrap_or(1.0);
            let params = Theorem42Params::new(eta, p.alpha.unwrap_or(1.0), radius);
            let pts = samples(cfg, v.dim(), radius, 2000, 48);
            let r = theorem42_harness(&v, &params, &pts)?;
            artifacts.extend(exclusion_svg(&r));
            r
        }
        Command::Cor43 => {
            let (_, v) = potential(cfg)?;
            let eps = required(cfg, p.eps, "--eps")?;
            let radius = p.radius.unwrap_or(1.0);
            let params = Corollary43Params::new(eps, p.alpha.unwrap_or(1.0), radius);
            let n = v.dim();
            let pts = if n == 1 && cfg.samples.is_none() {
                disc_grid(radius, cfg.grid.unwrap_or(201))
            } else {
                samples(cfg, n, radius, 2000, 48)
            };
            let r = corollary43_harness(&v, &params, &pts)?;
            if n == 1 {
                if let Some(ex) = &r.exclusion {
                    let shift = r.constants.get("robin_shift").copied().unwrap_or(0.0);
                    let mut rows = Vec::new();
                    for (x, y) in square_grid(CSV_GRID, radius) {
                        let z = CPoint::c1_parts(x, y);
                        if z.norm() > radius {
                            continue;
                        }
                        let value = v.eval(&z)?.finite().map_or(f64::NEG_INFINITY, |u| u + shift);
                        rows.push(GridRow { x, y, value, in_exceptional: ex.expanded_cover.covers(&z)? });
                    }
                    artifacts.push(Artifact::new("lemniscate.csv", lemniscate_csv(&rows)));
                }
            }
            artifacts.extend(exclusion_svg(&r));
            r
        }
        Command::Capacity => {
            let set = input::plane_set(doc)?;
            let est = capacity_1d(&set)?;
            let mut r = HarnessReport::new("capacity");
            r.constant("capacity", est.value);
            r.constant("uncertainty", est.uncertainty);
            r.count("node_count", est.node_count);
            r.series.insert("fekete_sizes".into(), est.diameters.iter().map(|d| d.0 as f64).collect());
            r.series.insert("fekete_diameters".into(), est.diameters.iter().map(|d| d.1).collect());
            r.note(match est.method {
                CapacityMethod::ClosedForm => "method CLOSED_FORM",
                CapacityMethod::Fekete => "method FEKETE",
            });
            r
        }
        Command::Cor44 => {
            let set = input::plane_set(doc)?;
            corollary44_check(&set, p.alpha.unwrap_or(1.0), cfg.grid.unwrap_or(101))?
        }
        Command::Constants => {
            let mut r = HarnessReport::new("constants");
            if p.eta.is_none() && (p.sigma.is_none() || p.tau.is_none()) {
                return Err(CliError::MissingParam { command: "constants", what: "--eta or both --sigma and --tau" });
            }
            if let Some(eta) = p.eta {
                r.params.insert("eta".into(), eta);
                r.constant("H", h_constant(eta)?);
            }
            if let (Some(sigma), Some(tau)) = (p.sigma, p.tau) {
                r.params.insert("sigma".into(), sigma);
                r.params.insert("tau".into(), tau);
                r.constant("nu", nu_constant(sigma, tau)?);
                r.constant("rho", rho_constant(sigma, tau)?);
                r.constant("inclusion_radius", moebius_inclusion_radius(sigma, tau));
            }
            r
        }
        Command::ThreeCircleMax => {
            let (_, v) = potential(cfg)?;
            let sigma = required(cfg, p.sigma, "--sigma")?;
            let tau = required(cfg, p.tau, "--tau")?;
            let radius = p.radius.unwrap_or(1.0);
            let pts = samples(cfg, v.dim(), tau * radius, 10_000, 200);
            three_circle_max_check(&v, sigma, tau, radius, &pts)?
        }
        Command::LelongBound => {
            let (spec, v) = potential(cfg)?;
            let sigma = required(cfg, p.sigma, "--sigma")?;
            let tau = required(cfg, p.tau, "--tau")?;
            let radius = p.radius.unwrap_or(1.0);
            let s_sigma = sphere_sup(&v, sigma * radius)?;
            let spread = sphere_sup(&v, radius)? - s_sigma;
            if !(spread > 0.0) {
                return Err(lemlab_core::Error::Degenerate("the potential is constant on B_R".into()).into());
            }
            let u = v.affine_pullback(radius, 1.0 / spread, -s_sigma / spread)?;
            let mut points: Vec<CPoint> = spec
                .atoms()
                .into_iter()
                .map(|a| a.scale_real(1.0 / radius))
                .filter(|a| a.norm() <= tau)
                .collect();
            if points.is_empty() {
                points.push(CPoint::origin(v.dim()));
            }
            let mut r = HarnessReport::new("lelong_bound").param("sigma", sigma).param("tau", tau).param("R", radius);
            let mut ests = Vec::new();
            let mut ok = true;
            let mut nu = 0.0;
            for z in &points {
                let b = lelong_bound_check(&u, sigma, tau, z)?;
                ests.push(b.estimate);
                ok &= b.within_bound;
                nu = b.nu;
            }
            r.constant("nu_sigma_tau", nu);
            r.constant("max_estimate", ests.iter().copied().fold(f64::NEG_INFINITY, f64::max));
            r.count("points", points.len());
            r.series.insert("estimates".into(), ests);
            r.add_provenance(v.provenance());
            r.verdict = Verdict::from_bool(ok);
            r
        }
        Command::ThreeCircleMin => {
            let (_, v) = potential(cfg)?;
            let sigma = required(cfg, p.sigma, "--sigma")?;
            let tau = required(cfg, p.tau, "--tau")?;
            let radius = p.radius.unwrap_or(1.0);
            let nu = match p.nu {
                Some(nu) => nu,
                None => 1.1 * nu_constant(sigma, tau)?,
            };
            let pts = samples(cfg, v.dim(), tau * radius, 10_000, 48);
            let eta = match p.eta {
                Some(eta) => eta,
                None => 0.5 * three_circle_eta0(&v, sigma, tau, nu, radius, &pts)?,
            };
            let mut params = ThreeCircleParams::new(sigma, tau, nu, eta, p.alpha.unwrap_or(1.0), radius);
            params.c_n = p.c_n;
            params.seed = cfg.seed;
            let r = three_circle_min_harness(&v, &params, &pts)?;
            artifacts.extend(exclusion_svg(&r));
            r
        }
        Command::Cor64 => {
            let (_, v) = potential(cfg)?;
            let eta = required(cfg, p.eta, "--eta")?;
            let radius = p.radius.unwrap_or(1.0);
            let pts = samples(cfg, v.dim(), radius, 2000, 48);
            let r = corollary64_harness(&v, eta, p.alpha.unwrap_or(1.0), radius, &pts)?;
            artifacts.extend(exclusion_svg(&r));
            r
        }
        Command::Essential => {
            let (_, v) = potential(cfg)?;
            let eps = required(cfg, p.eps, "--eps")?;
            let n = v.dim();
            let alpha = p.alpha.unwrap_or(1.0);
            let exponent = p.p.unwrap_or(2.0 * n as f64 - 2.0 + alpha);
            let region = p.tau.unwrap_or(0.5) * p.radius.unwrap_or(1.0);
            let pts = if n == 1 && cfg.samples.is_none() {
                disc_grid(region, cfg.grid.unwrap_or(120))
            } else {
                samples(cfg, n, region, 2000, 2000)
            };
            let mut r = HarnessReport::new("essential").param("eps", eps).param("p", exponent).param("region", region);
            let mut curve = Vec::new();
            for k in 0..6 {
                let e = eps * 0.5f64.powi(k);
                curve.push((e, essential_lower_bound(&v, exponent, e, region, &pts)?));
            }
            r.constant("essential_lower_bound", curve[0].1);
            r.count("samples", pts.len());
            r.series.insert("eps".into(), curve.iter().map(|c| c.0).collect());
            r.series.insert("lower_bound".into(), curve.iter().map(|c| c.1).collect());
            r.add_provenance(v.provenance());
            artifacts.push(Artifact::new("convergence.csv", series_csv(("eps", "lower_bound"), &curve)));
            r
        }
        Command::Lemma51 | Command::Prop52 => {
            let spec = input::green_spec(doc)?;
            let eta = required(cfg, p.eta, "--eta")?;
            let mut params = Lemma51Params::new(p.s.unwrap_or(0.5), eta, p.alpha.unwrap_or(1.0));
            params.c_n = p.c_n;
            params.seed = cfg.seed;
            let pts = samples(cfg, spec.dimension, LEMMA_SAMPLE_RADIUS, 400, 48);
            let r = if cfg.command == Command::Lemma51 {
                lemma51_harness(&spec, &params, &pts)?
            } else {
                prop52_harness(&spec, &params, &pts)?
            };
            artifacts.extend(exclusion_svg(&r));
            r
        }
        Command::Thm53 => {
            let (_, v) = potential(cfg)?;
            let eta = required(cfg, p.eta, "--eta")?;
            let rho = p.rho.unwrap_or(0.5);
            let mut params = Theorem53Params::new(rho, p.s.unwrap_or(0.5), eta, p.alpha.unwrap_or(1.0));
            params.c_n = p.c_n;
            params.seed = cfg.seed;
            let pts = samples(cfg, v.dim(), rho, 400, 48);
            let r = theorem53_harness(&v, &params, &pts)?;
            artifacts.extend(exclusion_svg(&r));
            r
        }
    };
    rep.seed = Some(cfg.seed);
    Ok(Outcome { payload: rep, artifacts })
}

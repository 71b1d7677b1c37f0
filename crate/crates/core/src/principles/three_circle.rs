//! Three-circle principles: the Hadamard maximum estimate and the minimum estimate outside
//! pseudo-balls of small content.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{boundary_mean, invariant_theta, kappa_constant, pseudo_ball_hull, resolve_c_n, run_lemma, unit_ball_mass};
use crate::cover::{set_content_upper, BallCover, MetricBall};
use crate::error::{domain, Error, Result};
use crate::exclusion::DEFAULT_SCAN_DEPTH;
use crate::point::CPoint;
use crate::potentials::{lelong_number, PshOracle, DEFAULT_SEED};
use crate::report::{HarnessReport, Verdict};

use super::constants::{nu_constant, rho_constant};
use super::sup::sphere_sup;

/// Smallest `s` tried when searching for a radius with `theta(z, s) < nu` on the sample.
const MIN_S: f64 = 1.0 / (1u64 << 30) as f64;
const NORMALIZATION_TOL: f64 = 1e-9;
const LELONG_RADII: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];

fn to_f64(v: &PshOracle, z: &CPoint) -> Result<f64> {
    Ok(v.eval(z)?.finite().unwrap_or(f64::NEG_INFINITY))
}

fn check_in_ball(samples: &[CPoint], n: usize, radius: f64, what: &str) -> Result<()> {
    for z in samples {
        z.check_dim(n)?;
        if z.norm() > radius * (1.0 + 1e-12) {
            return Err(domain!("sample {z} lies outside {what} (radius {radius})"));
        }
    }
    Ok(())
}

/// Hadamard's estimate `V(z) <= S(sigma R) + rho(sigma, tau) (S(R) - S(sigma R))` on
/// `B_(tau R)`, where `S(r)` is the sup of `V` over `B_r`, estimated on the sphere.
pub fn three_circle_max_check(v: &PshOracle, sigma: f64, tau: f64, radius: f64, samples: &[CPoint]) -> Result<HarnessReport> {
    let rho = rho_constant(sigma, tau)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(domain!("R must be positive, got {radius}"));
    }
    check_in_ball(samples, v.dim(), tau * radius, "B_(tau R)")?;
    let s_sigma = sphere_sup(v, sigma * radius)?;
    let s_one = sphere_sup(v, radius)?;
    let rhs = s_sigma + rho * (s_one - s_sigma);
    let slack = 1e-9 + 1e-6 * (1.0 + s_one.abs() + s_sigma.abs());
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for z in samples {
        let margin = rhs - to_f64(v, z)?;
        worst = worst.min(margin);
        if margin < -slack {
            violations += 1;
        }
    }
    let mut r = HarnessReport::new("three_circle_max").param("sigma", sigma).param("tau", tau).param("R", radius);
    r.constant("rho", rho);
    r.constant("sup_sigma", s_sigma);
    r.constant("sup_one", s_one);
    r.constant("slack", slack);
    r.constant("worst_margin", worst);
    r.count("samples", samples.len());
    r.count("violations", violations);
    r.add_provenance(v.provenance());
    r.verdict = Verdict::from_bool(violations == 0);
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LelongBound {
    pub estimate: f64,
    pub nu: f64,
    pub within_bound: bool,
}

/// Lelong number of `u` at `z`, for `u <= 1` on the unit ball with `max_{B_sigma} u >= 0`
/// and `|z| <= tau`; such a `u` has `theta_u(z) <= nu(sigma, tau)`. The flag allows 0.05
/// for the estimator.
pub fn lelong_bound_check(u: &PshOracle, sigma: f64, tau: f64, z: &CPoint) -> Result<LelongBound> {
    let nu = nu_constant(sigma, tau)?;
    z.check_dim(u.dim())?;
    if z.norm() > tau * (1.0 + 1e-12) {
        return Err(domain!("point {z} lies outside B_tau, tau = {tau}"));
    }
    let top = sphere_sup(u, 1.0)?;
    if top > 1.0 + 1e-6 {
        return Err(domain!("normalization violated: sup of u on the unit ball is {top} > 1"));
    }
    let inner = sphere_sup(u, sigma)?;
    if inner < -1e-6 {
        return Err(domain!("normalization violated: max of u on B_sigma is {inner} < 0"));
    }
    let est = lelong_number(u, z, &LELONG_RADII)?;
    Ok(LelongBound { estimate: est.value, nu, within_bound: est.value <= nu + 0.05 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeCircleParams {
    pub sigma: f64,
    pub tau: f64,
    /// Must exceed `nu(sigma, tau)`.
    pub nu: f64,
    pub eta: f64,
    pub alpha: f64,
    pub radius: f64,
    pub c_n: Option<f64>,
    pub theta_tol: f64,
    /// Absolute slack on the lower bound, scaled by `1 + |S(sigma R)| + (S(R) - S(sigma R))`.
    pub lower_tol: f64,
    /// Fraction of good samples that must satisfy the lower bound.
    pub good_fraction: f64,
    pub scan_depth: u32,
    pub seed: u64,
}

impl ThreeCircleParams {
    pub fn new(sigma: f64, tau: f64, nu: f64, eta: f64, alpha: f64, radius: f64) -> Self {
        ThreeCircleParams {
            sigma,
            tau,
            nu,
            eta,
            alpha,
            radius,
            c_n: None,
            theta_tol: 0.0,
            lower_tol: 1e-9,
            good_fraction: 0.999,
            scan_depth: DEFAULT_SCAN_DEPTH,
            seed: DEFAULT_SEED,
        }
    }
}

struct Normalized {
    s_sigma: f64,
    s_one: f64,
    spread: f64,
    /// `(V(R z) - S(sigma R)) / spread - 1`, nonpositive on the unit ball.
    w: PshOracle,
    scaled: Vec<CPoint>,
    s: f64,
    theta_max: f64,
}

fn normalize(v: &PshOracle, sigma: f64, tau: f64, nu: f64, radius: f64, samples: &[CPoint]) -> Result<Normalized> {
    let nu_st = nu_constant(sigma, tau)?;
    if !(nu > nu_st) {
        return Err(domain!("nu must exceed nu(sigma, tau) = {nu_st}, got {nu}"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(domain!("R must be positive, got {radius}"));
    }
    check_in_ball(samples, v.dim(), tau * radius, "B_(tau R)")?;
    let s_sigma = sphere_sup(v, sigma * radius)?;
    let s_one = sphere_sup(v, radius)?;
    let spread = s_one - s_sigma;
    if !(spread > 1e-12 * (1.0 + s_one.abs())) {
        return Err(Error::Degenerate(format!(
            "V is constant on B_R (sup over B_(sigma R) = {s_sigma}, sup over B_R = {s_one})"
        )));
    }
    let w = v.affine_pullback(radius, 1.0 / spread, -s_sigma / spread - 1.0)?;
    let scaled: Vec<CPoint> = samples.iter().map(|z| z.scale_real(1.0 / radius)).collect();
    let tol = if v.dim() == 1 { NORMALIZATION_TOL } else { 1e-3 };
    for z in scaled.iter().cloned().chain(w.quadrature().nodes()) {
        if let Some(x) = w.eval(&z)?.finite() {
            if x > tol {
                return Err(domain!("normalized function exceeds 1 at {z} by {x}; sup estimation failed"));
            }
        }
    }
    let quad = w.quadrature().clone();
    let mut s = 0.5;
    loop {
        let theta_max = scaled
            .par_iter()
            .map(|z| invariant_theta(&w, z, s, &quad))
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        if theta_max < nu {
            return Ok(Normalized { s_sigma, s_one, spread, w, scaled, s, theta_max });
        }
        s *= 0.5;
        if s < MIN_S {
            return Err(Error::Degenerate(format!("theta(z, s) stays >= nu = {nu} down to s = {MIN_S}")));
        }
    }
}

/// Largest admissible `eta` for [`three_circle_min_harness`]: `min(s, 1/3)`, where `s` is the
/// first radius `2^-k / 2` with `theta(z, s) < nu` at every sample for the normalized function.
pub fn three_circle_eta0(v: &PshOracle, sigma: f64, tau: f64, nu: f64, radius: f64, samples: &[CPoint]) -> Result<f64> {
    Ok(normalize(v, sigma, tau, nu, radius, samples)?.s.min(1.0 / 3.0))
}

/// Three-circle minimum estimate: at good samples of `B_(tau R)`
/// `V(z) >= S(sigma R) + nu log(eta / C) (S(R) - S(sigma R))`, and the exceptional samples sit
/// in balls of radius at most `eta R` with `sum r^(2n-2+alpha) < 9^(n-1) (R e)^(2n-2+alpha) eta^alpha / alpha`.
///
/// With `u = (V(R .) - S(sigma R)) / (S(R) - S(sigma R))` the function `w = u - 1` is
/// nonpositive on the unit ball. The harness picks `s` with `theta_w(z, s) < nu` on the
/// sample and applies the unit-ball lower bound to `w` on `B_tau`, which gives the estimate
/// with `C = 3 exp(K / nu)`, `K = -1 - kappa_n(tau) int w d sigma + c_n mu_w(B) log(e / s)`.
/// Pseudo-balls are replaced by their Euclidean hulls, whose radii are no larger.
pub fn three_circle_min_harness(v: &PshOracle, p: &ThreeCircleParams, samples: &[CPoint]) -> Result<HarnessReport> {
    if !(p.alpha > 0.0 && p.alpha <= 2.0) {
        return Err(domain!("alpha must lie in (0,2], got {}", p.alpha));
    }
    if !(p.good_fraction > 0.0 && p.good_fraction <= 1.0) {
        return Err(domain!("good fraction must lie in (0,1], got {}", p.good_fraction));
    }
    if samples.is_empty() {
        return Err(Error::Empty("sample set"));
    }
    let nz = normalize(v, p.sigma, p.tau, p.nu, p.radius, samples)?;
    let eta0 = nz.s.min(1.0 / 3.0);
    if !(p.eta > 0.0 && p.eta < eta0) {
        return Err(domain!("eta must lie in (0, eta0) with eta0 = {eta0}, got {}", p.eta));
    }
    let n = v.dim();
    let w = &nz.w;
    let c_n = resolve_c_n(n, p.c_n, p.seed)?;
    let mu = unit_ball_mass(w)?.max(0.0);
    let run = run_lemma(w, mu, c_n, nz.s, p.eta, p.alpha, p.theta_tol, p.scan_depth, &nz.scaled)?;
    let kappa = kappa_constant(p.tau, n)?;
    let bmean = boundary_mean(w, w.quadrature())?;
    let e = std::f64::consts::E;
    let k_const = -1.0 - kappa * bmean + c_n * mu * (e / nz.s).ln();
    let c_const = 3.0 * (k_const / p.nu).exp();
    let lower = nz.s_sigma + p.nu * (p.eta / c_const).ln() * nz.spread;
    let tol = p.lower_tol * (1.0 + nz.s_sigma.abs() + nz.spread);

    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for (zeta, _, _) in &run.good {
        let val = to_f64(v, &zeta.scale_real(p.radius))?;
        worst = worst.min(val - lower);
        if val < lower - tol {
            violations += 1;
        }
    }
    let good = run.good.len();
    let satisfied = good - violations;
    let fraction_ok = good == 0 || satisfied as f64 >= p.good_fraction * good as f64;

    let pexp = 2.0 * n as f64 - 2.0 + p.alpha;
    let hulls: Vec<MetricBall> = run
        .exclusion
        .expanded_cover
        .balls
        .iter()
        .map(|b| {
            let (c, r) = pseudo_ball_hull(&b.center, b.radius);
            MetricBall::euclidean(c.scale_real(p.radius), r * p.radius)
        })
        .collect::<Result<_>>()?;
    let hull_cover = BallCover::new(hulls, None)?;
    let content = hull_cover.content(pexp);
    let bound = 9f64.powi(n as i32 - 1) * (p.radius * e).powf(pexp) * p.eta.powf(p.alpha) / p.alpha;
    let radii_ok = hull_cover.radii().all(|r| r <= p.eta * p.radius * (1.0 + 1e-12));
    let mut covered = true;
    for b in &run.exclusion.bad_points {
        if !hull_cover.covers(&b.point.scale_real(p.radius))? {
            covered = false;
            break;
        }
    }

    let mut r = HarnessReport::new("three_circle_min")
        .param("sigma", p.sigma)
        .param("tau", p.tau)
        .param("nu", p.nu)
        .param("eta", p.eta)
        .param("alpha", p.alpha)
        .param("R", p.radius);
    r.constant("nu_sigma_tau", nu_constant(p.sigma, p.tau)?);
    r.constant("sup_sigma", nz.s_sigma);
    r.constant("sup_one", nz.s_one);
    r.constant("s", nz.s);
    r.constant("theta_s_max", nz.theta_max);
    r.constant("eta0", eta0);
    r.constant("kappa", kappa);
    r.constant("boundary_mean", bmean);
    r.constant("c_n", c_n);
    r.constant("mu_B", mu);
    r.constant("K", k_const);
    r.constant("C", c_const);
    r.constant("lower_bound", lower);
    r.constant("worst_margin", worst);
    r.constant("invariant_content", run.exclusion.content_sum);
    r.constant("invariant_bound", run.exclusion.paper_bound);
    r.count("samples", samples.len());
    r.count("good", good);
    r.count("bad", run.exclusion.bad_count());
    r.count("selected", run.exclusion.selected_disjoint.len());
    r.count("lower_bound_violations", violations);
    r.content_sum = content;
    r.paper_bound = bound;
    r.add_provenance(v.provenance());
    r.seed = Some(p.seed);
    r.series.insert("hull_radii".into(), hull_cover.radii().collect());
    r.verdict = Verdict::from_bool(fraction_ok && run.exclusion.pass && content < bound && radii_ok && covered);
    r.exclusion = Some(run.exclusion);
    Ok(r)
}

/// Inner radius used for the corollary with `tau = 1/(2e)`.
pub const COROLLARY64_SIGMA: f64 = 1e-3;

/// `V(z) >= -log(C / eta) max_{B_(2eR)} V` on `B_R` outside balls of radius at most `eta R`,
/// for `V` psh on `B_(2eR)` with `V(0) = 0`.
///
/// Runs the three-circle minimum estimate at scale `2eR` with `tau = 1/(2e)`,
/// `sigma = 1e-3`, `nu = (nu(sigma, tau) + 1) / 2` and `eta / (2e)`, then checks the
/// simplified bound with `C = 2e C'`. The content bound `9^(n-1) (R e)^(2n-2+alpha)
/// eta^alpha / alpha` agrees with the delegated one in C^1; in higher dimension the
/// delegated bound is larger by `2^(2n-2)` and is the one enforced.
pub fn corollary64_harness(v: &PshOracle, eta: f64, alpha: f64, radius: f64, samples: &[CPoint]) -> Result<HarnessReport> {
    let n = v.dim();
    let v0 = to_f64(v, &CPoint::origin(n))?;
    if !(v0.abs() <= 1e-9) {
        return Err(domain!("V(0) must vanish, got {v0}"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(domain!("R must be positive, got {radius}"));
    }
    check_in_ball(samples, n, radius, "B_R")?;
    let e = std::f64::consts::E;
    let (sigma, tau) = (COROLLARY64_SIGMA, 1.0 / (2.0 * e));
    let big_r = 2.0 * e * radius;
    let nu = 0.5 * (nu_constant(sigma, tau)? + 1.0);
    let pexp = 2.0 * n as f64 - 2.0 + alpha;
    let hc2 = 9f64.powi(n as i32 - 1) * (radius * e).powf(pexp) * eta.powf(alpha) / alpha;
    let s_one = sphere_sup(v, big_r)?;
    let s_sigma = sphere_sup(v, sigma * big_r)?;

    let mut r = HarnessReport::new("cor64").param("eta", eta).param("alpha", alpha).param("R", radius);
    r.constant("sigma", sigma);
    r.constant("tau", tau);
    r.constant("nu", nu);
    r.constant("sup_big", s_one);
    if !(s_one - s_sigma > 1e-12 * (1.0 + s_one.abs())) {
        r.note("V is constant on B_(2eR); the estimate is vacuous");
        r.count("samples", samples.len());
        r.paper_bound = hc2;
        r.verdict = Verdict::Pass;
        return Ok(r);
    }
    let inner = ThreeCircleParams::new(sigma, tau, nu, eta / (2.0 * e), alpha, big_r);
    let base = three_circle_min_harness(v, &inner, samples)?;
    let c_prime = base.constants["C"];
    let c_const = 2.0 * e * c_prime;
    let lower = -(c_const / eta).ln() * s_one;
    let ex = base.exclusion.as_ref().expect("delegated run records its cover");
    let tol = 1e-9 * (1.0 + s_one.abs());
    let mut violations = 0usize;
    for zeta in &ex.good_points {
        if to_f64(v, &zeta.scale_real(big_r))? < lower - tol {
            violations += 1;
        }
    }
    for (k, val) in &base.constants {
        r.constant(&format!("inner_{k}"), *val);
    }
    r.constant("C", c_const);
    r.constant("lower_factor", -(c_const / eta).ln());
    r.count("samples", samples.len());
    r.count("good", ex.good_count());
    r.count("bad", ex.bad_count());
    r.count("lower_bound_violations", violations);
    r.content_sum = base.content_sum;
    r.paper_bound = if n == 1 { hc2 } else { base.paper_bound };
    r.add_provenance(v.provenance());
    r.seed = base.seed;
    r.verdict = base.verdict.and(Verdict::from_bool(violations == 0 && r.content_sum < r.paper_bound));
    if n > 1 {
        r.note(format!("content compared with the delegated bound {}; the C^1 form is {hc2}", base.paper_bound));
    }
    r.exclusion = base.exclusion;
    Ok(r)
}

/// Lower approximation of the `(h_p, eps)`-essential lower bound of `u` on `B_region`.
///
/// Samples in the region are removed worst-first for as long as the removed set has content
/// at most `eps_content`; the minimum over the rest is returned. The content of the removed
/// part is estimated as a set, enlarging covers by the largest nearest-neighbour distance of
/// the sample. The result is nondecreasing in `eps_content`.
pub fn essential_lower_bound(u: &PshOracle, p: f64, eps_content: f64, region: f64, samples: &[CPoint]) -> Result<f64> {
    if !(p > 0.0) {
        return Err(domain!("content exponent must be positive, got {p}"));
    }
    if !(eps_content >= 0.0) {
        return Err(domain!("content budget must be nonnegative, got {eps_content}"));
    }
    let pts: Vec<CPoint> = samples.iter().filter(|z| z.norm() <= region * (1.0 + 1e-12)).cloned().collect();
    if pts.is_empty() {
        return Err(Error::Empty("samples in the region"));
    }
    let mut vals: Vec<(f64, usize)> = pts.iter().enumerate().map(|(i, z)| Ok((to_f64(u, z)?, i))).collect::<Result<_>>()?;
    vals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let fill = nearest_neighbour_spread(&pts);
    let content_of = |k: usize| -> Result<f64> {
        if k == 0 {
            return Ok(0.0);
        }
        let removed: Vec<CPoint> = vals[..k].iter().map(|&(_, i)| pts[i].clone()).collect();
        Ok(set_content_upper(&removed, p, None, fill)?.0)
    };
    let (mut lo, mut hi) = (0usize, vals.len());
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if content_of(mid)? <= eps_content {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if lo == vals.len() {
        return Err(Error::Degenerate(format!("content budget {eps_content} removes every sample")));
    }
    Ok(vals[lo].0)
}

fn nearest_neighbour_spread(pts: &[CPoint]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let mut order: Vec<usize> = (0..pts.len()).collect();
    let key = |i: usize| pts[i].coords()[0].re;
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)).then(a.cmp(&b)));
    (0..order.len())
        .into_par_iter()
        .map(|k| {
            let a = &pts[order[k]];
            let x = key(order[k]);
            let mut best = f64::INFINITY;
            for j in (k + 1)..order.len() {
                if key(order[j]) - x > best {
                    break;
                }
                best = best.min(a.dist(&pts[order[j]]));
            }
            for j in (0..k).rev() {
                if x - key(order[j]) > best {
                    break;
                }
                best = best.min(a.dist(&pts[order[j]]));
            }
            best
        })
        .reduce(|| 0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::moebius_apply;
    use crate::point::LogValue;
    use crate::potentials::{discrete_potential, AtomicMeasure, FnPotential};
    use crate::sampling::{disc_grid, uniform_ball_samples};
    use num_complex::Complex64;

    fn atoms(list: &[(f64, f64, f64)]) -> PshOracle {
        let a: Vec<(Complex64, f64)> = list.iter().map(|&(x, y, w)| (Complex64::new(x, y), w)).collect();
        discrete_potential(&AtomicMeasure::planar(&a).unwrap()).unwrap()
    }

    fn on_circle(r: f64, m: usize) -> Vec<CPoint> {
        (0..m).map(|k| CPoint::c1(Complex64::from_polar(r, k as f64 * 0.37))).collect()
    }

    #[test]
    fn max_principle_examples() {
        let log_z = atoms(&[(0.0, 0.0, 1.0)]);
        let r = three_circle_max_check(&log_z, 0.1, 0.5, 1.0, &on_circle(0.5, 50)).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.constants["worst_margin"].abs() < 1e-9);
        let konst = FnPotential::new(1, "const", |_: &CPoint| LogValue::Finite(0.3)).oracle().unwrap();
        assert!(three_circle_max_check(&konst, 0.2, 0.4, 2.0, &uniform_ball_samples(1, 1, 0.8, 50)).unwrap().passed());
        let v = atoms(&[(1.0, 0.0, 0.5), (-1.0, 0.0, 0.5)]);
        for (sigma, tau) in [(0.1, 0.3), (0.05, 0.9), (0.4, 0.5)] {
            let samples = uniform_ball_samples(2, 1, tau * 1.5, 300);
            assert!(three_circle_max_check(&v, sigma, tau, 1.5, &samples).unwrap().passed());
        }
    }

    #[test]
    fn lelong_bound_extremal_and_smooth() {
        let (sigma, tau) = (0.1, 0.5);
        let nu = nu_constant(sigma, tau).unwrap();
        let z0 = CPoint::c1_parts(0.0, tau);
        let base = z0.clone();
        let u = FnPotential::new(1, "extremal", move |z: &CPoint| {
            LogValue::ln(moebius_apply(&base, z).map_or(1.0, |w| w.norm())).scale(nu).shift(1.0)
        })
        .oracle()
        .unwrap();
        let b = lelong_bound_check(&u, sigma, tau, &z0).unwrap();
        assert!((b.estimate - nu).abs() < 0.05 && b.within_bound, "{b:?}");
        let smooth = FnPotential::new(1, "re", |z: &CPoint| LogValue::Finite(0.5 * z.z().re)).oracle().unwrap();
        let b = lelong_bound_check(&smooth, sigma, tau, &CPoint::c1_parts(0.2, 0.1)).unwrap();
        assert!(b.estimate.abs() < 0.05);
        let too_big = FnPotential::new(1, "big", |_: &CPoint| LogValue::Finite(2.0)).oracle().unwrap();
        assert!(lelong_bound_check(&too_big, sigma, tau, &z0).is_err());
    }

    #[test]
    fn minimum_principle_for_log_modulus() {
        let v = atoms(&[(0.0, 0.0, 1.0)]);
        let nu = 1.1 * nu_constant(0.1, 0.5).unwrap();
        let mut samples = uniform_ball_samples(4, 1, 0.5, 2000);
        samples.push(CPoint::c1_parts(0.0, 0.0));
        let eta0 = three_circle_eta0(&v, 0.1, 0.5, nu, 1.0, &samples).unwrap();
        let p = ThreeCircleParams { c_n: Some(2.0), ..ThreeCircleParams::new(0.1, 0.5, nu, 0.5 * eta0, 1.0, 1.0) };
        let r = three_circle_min_harness(&v, &p, &samples).unwrap();
        assert!(r.passed(), "{:?} {:?} {} {}", r.constants, r.counts, r.content_sum, r.paper_bound);
        assert!(r.counts["bad"] >= 1);
        let ex = r.exclusion.unwrap();
        assert!(ex.bad_points.iter().all(|b| b.point.norm() < 0.5 * eta0));
    }

    #[test]
    fn harmonic_has_no_exceptional_set() {
        let v = FnPotential::new(1, "re", |z: &CPoint| LogValue::Finite(z.z().re)).oracle().unwrap();
        let nu = 1.1 * nu_constant(0.1, 0.5).unwrap();
        let samples = uniform_ball_samples(9, 1, 0.5, 100);
        let p = ThreeCircleParams { c_n: Some(2.0), theta_tol: 1e-6, ..ThreeCircleParams::new(0.1, 0.5, nu, 0.1, 1.0, 1.0) };
        let r = three_circle_min_harness(&v, &p, &samples).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.counts["bad"], 0);
    }

    #[test]
    fn constant_function_is_rejected() {
        let v = FnPotential::new(1, "c", |_: &CPoint| LogValue::Finite(1.0)).oracle().unwrap();
        let p = ThreeCircleParams::new(0.1, 0.5, 2.0, 0.1, 1.0, 1.0);
        assert!(matches!(three_circle_min_harness(&v, &p, &[CPoint::c1_parts(0.1, 0.0)]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn corollary_examples() {
        let v = atoms(&[(1.0, 0.0, 1.0)]);
        let samples = uniform_ball_samples(11, 1, 1.0, 1000);
        let r = corollary64_harness(&v, 0.01, 1.0, 1.0, &samples).unwrap();
        assert!(r.passed(), "{:?} {:?}", r.constants, r.counts);
        let zero = FnPotential::new(1, "zero", |_: &CPoint| LogValue::Finite(0.0)).oracle().unwrap();
        assert!(corollary64_harness(&zero, 0.1, 1.0, 1.0, &samples).unwrap().passed());
        assert!(corollary64_harness(&v.shifted(1.0), 0.1, 1.0, 1.0, &samples).is_err());
    }

    #[test]
    fn essential_lower_bound_examples() {
        let u = atoms(&[(0.0, 0.0, 1.0)]);
        let grid = disc_grid(0.5, 120);
        let plain = essential_lower_bound(&u, 1.0, 0.0, 0.5, &grid).unwrap();
        let direct = grid.iter().map(|z| z.norm().ln()).fold(f64::INFINITY, f64::min);
        assert_eq!(plain, direct);
        let cut = essential_lower_bound(&u, 1.0, 0.1, 0.5, &grid).unwrap();
        assert!((cut - 0.1f64.ln()).abs() < 0.1, "{cut}");
        let mut last = f64::NEG_INFINITY;
        for eps in [0.0, 0.01, 0.05, 0.1, 0.2] {
            let v = essential_lower_bound(&u, 1.0, eps, 0.5, &grid).unwrap();
            assert!(v >= last);
            last = v;
        }
        assert!(essential_lower_bound(&u, 1.0, 10.0, 0.5, &grid).is_err());
    }
}

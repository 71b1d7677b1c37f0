//! Lower bounds for functions of logarithmic growth outside small exceptional balls.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exclusion::{exclusion_cover, ExclusionParams, ExclusionReport, DEFAULT_SCAN_DEPTH};
use crate::point::CPoint;
use crate::potentials::{normalize_log_class, robin_mean, Provenance, PshOracle, DEFAULT_ROBIN_RADII};
use crate::report::{HarnessReport, Verdict};

/// Scan depth used for quadrature oracles, where each radius costs two sphere means.
pub const NUMERIC_SCAN_DEPTH: u32 = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem42Params {
    pub eta: f64,
    pub alpha: f64,
    pub radius: f64,
    /// Witness margin on `theta`; `None` picks 0 for exact oracles and 1e-6 otherwise.
    pub theta_tol: Option<f64>,
    /// Slack on the lower bound; `None` picks 1e-12 for exact oracles and 1e-2 otherwise.
    pub lower_tol: Option<f64>,
    /// Allowed `|Robin constant|` for membership in the normalized class.
    pub robin_tol: f64,
    pub scan_depth: Option<u32>,
}

impl Theorem42Params {
    pub fn new(eta: f64, alpha: f64, radius: f64) -> Self {
        Theorem42Params { eta, alpha, radius, theta_tol: None, lower_tol: None, robin_tol: 1e-6, scan_depth: None }
    }

    fn resolved(&self, v: &PshOracle) -> (f64, f64, u32) {
        let exact = v.provenance() != Provenance::NumericSphereMean;
        (
            self.theta_tol.unwrap_or(if exact { 0.0 } else { 1e-6 }),
            self.lower_tol.unwrap_or(if exact { 1e-12 } else { 1e-2 }),
            self.scan_depth.unwrap_or(if exact { DEFAULT_SCAN_DEPTH } else { NUMERIC_SCAN_DEPTH }),
        )
    }
}

/// For `V` in the logarithmic class with zero Robin constant: `V(z) >= -log(5e/eta)` at
/// every good sample of `B_R`, and the bad samples sit in balls of radius at most `eta`
/// with `sum r^(2n-2+alpha) < 5^(2n-2) (R + eta)^(2n-2) eta^alpha / alpha`.
pub fn theorem42_harness(v: &PshOracle, p: &Theorem42Params, samples: &[CPoint]) -> Result<HarnessReport> {
    if !(p.eta > 0.0 && p.eta < 5.0) {
        return Err(domain!("eta must lie in (0,5), got {}", p.eta));
    }
    if !(p.radius > 0.0 && p.radius.is_finite()) {
        return Err(domain!("R must be positive, got {}", p.radius));
    }
    if samples.is_empty() {
        return Err(crate::error::Error::Empty("sample set"));
    }
    let robin = robin_mean(v, &DEFAULT_ROBIN_RADII, v.quadrature())?;
    if robin.value.abs() > p.robin_tol {
        return Err(domain!(
            "V fails the logarithmic-class normalization: Robin constant {} exceeds {}",
            robin.value,
            p.robin_tol
        ));
    }
    let (theta_tol, lower_tol, depth) = p.resolved(v);
    let params = ExclusionParams::lelong_class(p.eta / 5.0, p.alpha)?
        .with_theta_tol(theta_tol)
        .with_scan_depth(depth);
    let ex = exclusion_cover(v, samples, &params, 1.0, p.radius)?;

    let lower = -(5.0 * std::f64::consts::E / p.eta).ln();
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for z in &ex.good_points {
        let val = v.eval(z)?.finite().unwrap_or(f64::NEG_INFINITY);
        worst = worst.min(val - lower);
        if val < lower - lower_tol {
            violations += 1;
        }
    }

    let mut r = HarnessReport::new("thm42").param("eta", p.eta).param("alpha", p.alpha).param("R", p.radius);
    r.constant("robin", robin.value);
    r.constant("lower_bound", lower);
    r.constant("worst_margin", worst);
    r.constant("theta_tol", theta_tol);
    r.constant("lower_tol", lower_tol);
    r.count("samples", samples.len());
    r.count("good", ex.good_count());
    r.count("bad", ex.bad_count());
    r.count("selected", ex.selected_disjoint.len());
    r.count("lower_bound_violations", violations);
    r.content_sum = ex.content_sum;
    r.paper_bound = ex.paper_bound;
    r.add_provenance(v.provenance());
    r.verdict = Verdict::from_bool(ex.pass && violations == 0);
    r.exclusion = Some(ex);
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corollary43Params {
    pub epsilon: f64,
    pub alpha: f64,
    pub radius: f64,
    pub theta_tol: Option<f64>,
    pub lower_tol: Option<f64>,
    pub scan_depth: Option<u32>,
}

impl Corollary43Params {
    pub fn new(epsilon: f64, alpha: f64, radius: f64) -> Self {
        Corollary43Params { epsilon, alpha, radius, theta_tol: None, lower_tol: None, scan_depth: None }
    }
}

/// The sublevel set `{V <= log eps}` of the normalized `V` meets `B_R` inside balls with
/// `sum r^(2n-2+alpha) <= 5^(2n-2) (R + 5)^(2n-2) (5 e eps)^alpha / alpha`.
///
/// `V` is shifted to zero Robin constant first. Every sample where the shifted function is
/// below `log eps` must lie in the expanded cover of the underlying lower-bound run.
pub fn corollary43_harness(v: &PshOracle, p: &Corollary43Params, samples: &[CPoint]) -> Result<HarnessReport> {
    let e = std::f64::consts::E;
    if !(p.epsilon > 0.0 && p.epsilon < 1.0 / e) {
        return Err(domain!("eps must lie in (0, 1/e), got {}", p.epsilon));
    }
    let u = normalize_log_class(v, v.quadrature())?;
    let eta = 5.0 * e * p.epsilon;
    let inner = Theorem42Params {
        theta_tol: p.theta_tol,
        lower_tol: p.lower_tol,
        scan_depth: p.scan_depth,
        ..Theorem42Params::new(eta, p.alpha, p.radius)
    };
    let base = theorem42_harness(&u, &inner, samples)?;
    let lower_tol = inner.resolved(&u).1;
    let ex: &ExclusionReport = base.exclusion.as_ref().expect("lower-bound run records its cover");

    let level = p.epsilon.ln();
    let (mut in_set, mut uncovered) = (0usize, 0usize);
    for z in samples {
        let val = u.eval(z)?.finite().unwrap_or(f64::NEG_INFINITY);
        if val <= level {
            in_set += 1;
            if val < level - lower_tol && !ex.expanded_cover.covers(z)? {
                uncovered += 1;
            }
        }
    }
    let k = 2.0 * u.dim() as f64 - 2.0;
    let bound = 5f64.powf(k) * (p.radius + 5.0).powf(k) * eta.powf(p.alpha) / p.alpha;

    let mut r = base.clone();
    r.harness = "cor43".into();
    r.params.remove("eta");
    r = r.param("eps", p.epsilon);
    r.constant("eta", eta);
    r.constant("robin_shift", v.shift() - u.shift());
    r.count("sublevel_samples", in_set);
    r.count("uncovered_sublevel", uncovered);
    r.paper_bound = bound;
    r.verdict = base.verdict.and(Verdict::from_bool(uncovered == 0 && ex.content_sum <= bound));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{discrete_potential, AtomicMeasure};
    use crate::sampling::{disc_grid, uniform_ball_samples};
    use num_complex::Complex64;

    fn log_abs_z() -> PshOracle {
        discrete_potential(&AtomicMeasure::planar(&[(Complex64::new(0.0, 0.0), 1.0)]).unwrap()).unwrap()
    }

    #[test]
    fn log_modulus_example() {
        let mut samples = uniform_ball_samples(3, 1, 2.0, 2000);
        samples.push(CPoint::c1_parts(0.0, 0.0));
        samples.push(CPoint::c1_parts(0.15, 0.0));
        let r = theorem42_harness(&log_abs_z(), &Theorem42Params::new(1.0, 1.0, 2.0), &samples).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.content_sum < 1.0);
        let ex = r.exclusion.unwrap();
        assert!(ex.bad_points.iter().all(|b| b.point.norm() < 0.2));
        assert!(ex.good_points.iter().all(|g| g.norm() >= 0.2));
    }

    #[test]
    fn unnormalized_is_rejected() {
        let v = log_abs_z().shifted(1.0);
        let samples = uniform_ball_samples(3, 1, 1.0, 10);
        assert!(theorem42_harness(&v, &Theorem42Params::new(1.0, 1.0, 1.0), &samples).is_err());
    }

    #[test]
    fn sublevel_of_log_modulus() {
        let samples = disc_grid(1.0, 101);
        let r = corollary43_harness(&log_abs_z(), &Corollary43Params::new(0.05, 1.0, 1.0), &samples).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.counts["sublevel_samples"] > 0);
        assert!(r.content_sum <= 5.0 * std::f64::consts::E * 0.05);
    }

    #[test]
    fn shifted_input_is_normalized() {
        let samples = disc_grid(1.0, 41);
        let v = log_abs_z().shifted(-0.7);
        let r = corollary43_harness(&v, &Corollary43Params::new(0.1, 1.0, 1.0), &samples).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

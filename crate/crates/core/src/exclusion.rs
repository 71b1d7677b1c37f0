//! The exclusion-ball engine.
//!
//! A sample `z` is *bad* when some radius `0 < t <= eps` has `theta(z, t) > A t^alpha`.
//! Bad samples get witness balls `B(z, t_z)`; a greedy Vitali selection among them is
//! expanded by 5 (Euclidean) or 3 (pseudo-balls) and its content
//! `sum (expansion * t_j)^(2n - 2 + alpha)` is compared with the theoretical bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{vitali_select, BallCover, Metric, MetricBall};
use crate::error::{domain, Result};
use crate::point::CPoint;

pub const DEFAULT_SCAN_DEPTH: u32 = 40;

/// Relative slack on the witness threshold. It keeps rounding in `A eps^alpha` from turning
/// an exact tie `theta = A t^alpha` into a witness.
pub const THRESHOLD_REL_TOL: f64 = 1e-12;

/// A projective-mass oracle `(z, t) -> theta(z, t)` as seen by the exclusion engine.
pub trait ThetaOracle: Sync {
    fn theta(&self, z: &CPoint, t: f64) -> Result<f64>;

    /// Radii at which `theta(z, .)` jumps. Exact step-function oracles report them so the
    /// witness search does not depend on the dyadic grid; the default is none.
    fn breakpoints(&self, _z: &CPoint) -> Result<Vec<f64>> {
        Ok(Vec::new())
    }
}

impl<F> ThetaOracle for F
where
    F: Fn(&CPoint, f64) -> Result<f64> + Sync,
{
    fn theta(&self, z: &CPoint, t: f64) -> Result<f64> {
        self(z, t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExclusionParams {
    pub epsilon: f64,
    pub alpha: f64,
    pub amplitude: f64,
    pub metric: Metric,
    pub scan_depth: u32,
    pub expansion: f64,
    /// Extra margin demanded of `theta` before a radius counts as a witness.
    /// Zero for exact oracles; quadrature oracles use it to absorb integration noise.
    #[serde(default)]
    pub theta_tol: f64,
}

impl ExclusionParams {
    pub fn new(epsilon: f64, alpha: f64, amplitude: f64, metric: Metric) -> Result<Self> {
        let p = ExclusionParams {
            epsilon,
            alpha,
            amplitude,
            metric,
            scan_depth: DEFAULT_SCAN_DEPTH,
            expansion: metric.expansion(),
            theta_tol: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Euclidean parameters with `A = alpha eps^-alpha`.
    pub fn lelong_class(epsilon: f64, alpha: f64) -> Result<Self> {
        Self::new(epsilon, alpha, alpha * epsilon.powf(-alpha), Metric::Euclidean)
    }

    pub fn with_theta_tol(mut self, tol: f64) -> Self {
        self.theta_tol = tol;
        self
    }

    pub fn with_scan_depth(mut self, depth: u32) -> Self {
        self.scan_depth = depth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(domain!("epsilon must lie in (0,1), got {}", self.epsilon));
        }
        if !(self.alpha > 0.0 && self.alpha <= 2.0) {
            return Err(domain!("alpha must lie in (0,2], got {}", self.alpha));
        }
        if !(self.amplitude > 0.0) || !self.amplitude.is_finite() {
            return Err(domain!("amplitude must be positive and finite, got {}", self.amplitude));
        }
        if self.scan_depth == 0 {
            return Err(domain!("scan depth must be positive"));
        }
        if self.expansion != self.metric.expansion() {
            return Err(domain!(
                "expansion {} does not match the {:?} metric (expected {})",
                self.expansion,
                self.metric,
                self.metric.expansion()
            ));
        }
        if !(self.theta_tol >= 0.0) {
            return Err(domain!("theta tolerance must be nonnegative"));
        }
        Ok(())
    }

    /// `eta = expansion * eps`: the largest radius of an expanded ball.
    pub fn eta(&self) -> f64 {
        self.expansion * self.epsilon
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BadPoint {
    pub point: CPoint,
    pub witness_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExclusionReport {
    pub good_points: Vec<CPoint>,
    pub bad_points: Vec<BadPoint>,
    pub selected_disjoint: BallCover,
    pub expanded_cover: BallCover,
    /// Exponent `2n - 2 + alpha` of the content sum.
    pub exponent: f64,
    pub content_sum: f64,
    pub paper_bound: f64,
    pub bad_points_covered: bool,
    pub pass: bool,
}

impl ExclusionReport {
    pub fn good_count(&self) -> usize {
        self.good_points.len()
    }

    pub fn bad_count(&self) -> usize {
        self.bad_points.len()
    }
}

/// Largest radius `t` in `(0, eps]` with `theta(z, t) > A t^alpha (1 + 1e-12) + theta_tol`, searched over
/// `eps 2^-k` for `k = 0..=scan_depth` together with the oracle's breakpoints.
pub fn witness_radius_search<O: ThetaOracle + ?Sized>(
    theta: &O,
    z: &CPoint,
    params: &ExclusionParams,
) -> Result<Option<f64>> {
    let eps = params.epsilon;
    let t_min = eps * (-(params.scan_depth as f64)).exp2();
    let mut radii: Vec<f64> = (0..=params.scan_depth).map(|k| eps * (-(k as f64)).exp2()).collect();
    radii.extend(
        theta
            .breakpoints(z)?
            .into_iter()
            .filter(|&t| t > 0.0 && t <= eps && t >= t_min),
    );
    radii.sort_by(|a, b| b.total_cmp(a));
    radii.dedup();
    for t in radii {
        let th = theta.theta(z, t)?;
        if th > params.amplitude * t.powf(params.alpha) * (1.0 + THRESHOLD_REL_TOL) + params.theta_tol {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Runs the exclusion-ball method on a sample.
///
/// `mass_bound` multiplies the Euclidean bound `5^(2n-2) (R + eta)^(2n-2) eta^alpha / alpha`
/// (it is the total projective mass, 1 on the logarithmic class). For pseudo-balls the mass
/// already enters through the amplitude and the bound is `9^(n-1) eta^alpha / alpha`.
pub fn exclusion_cover<O: ThetaOracle + ?Sized>(
    theta: &O,
    samples: &[CPoint],
    params: &ExclusionParams,
    mass_bound: f64,
    radius: f64,
) -> Result<ExclusionReport> {
    params.validate()?;
    if !(mass_bound >= 0.0) {
        return Err(domain!("mass bound must be nonnegative, got {mass_bound}"));
    }
    let n = samples.first().map_or(1, CPoint::dim);
    for z in samples {
        z.check_dim(n)?;
        let inside = match params.metric {
            Metric::Euclidean => z.norm() <= radius * (1.0 + 1e-12),
            Metric::Invariant => z.norm() < 1.0,
        };
        if !inside {
            return Err(domain!(
                "sample {z} lies outside the declared domain ({:?}, R = {radius})",
                params.metric
            ));
        }
    }

    let witnesses: Vec<Option<f64>> = samples
        .par_iter()
        .map(|z| witness_radius_search(theta, z, params))
        .collect::<Result<_>>()?;

    let mut good_points = Vec::new();
    let mut bad_points = Vec::new();
    for (z, w) in samples.iter().zip(witnesses) {
        match w {
            None => good_points.push(z.clone()),
            Some(t) => bad_points.push(BadPoint { point: z.clone(), witness_radius: t }),
        }
    }

    let balls = bad_points
        .iter()
        .map(|b| MetricBall::new(b.point.clone(), b.witness_radius, params.metric))
        .collect::<Result<Vec<_>>>()?;
    let (selected_disjoint, expanded_cover) = vitali_select(&balls, params.expansion)?;

    let exponent = 2.0 * n as f64 - 2.0 + params.alpha;
    let content_sum = expanded_cover.content(exponent);
    let eta = params.eta();
    let paper_bound = match params.metric {
        Metric::Euclidean => {
            let k = 2.0 * n as f64 - 2.0;
            mass_bound * 5f64.powf(k) * (radius + eta).powf(k) * eta.powf(params.alpha) / params.alpha
        }
        Metric::Invariant => 9f64.powi(n as i32 - 1) * eta.powf(params.alpha) / params.alpha,
    };

    let mut bad_points_covered = true;
    for b in &bad_points {
        if !expanded_cover.covers(&b.point)? {
            bad_points_covered = false;
            break;
        }
    }
    let pass = content_sum < paper_bound && bad_points_covered;
    log::debug!(
        "exclusion: {} good, {} bad, {} selected, content {content_sum:.6e} vs bound {paper_bound:.6e}",
        good_points.len(),
        bad_points.len(),
        selected_disjoint.len()
    );
    Ok(ExclusionReport {
        good_points,
        bad_points,
        selected_disjoint,
        expanded_cover,
        exponent,
        content_sum,
        paper_bound,
        bad_points_covered,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_atom(z: &CPoint, t: f64) -> Result<f64> {
        Ok(if z.norm() <= t { 1.0 } else { 0.0 })
    }

    #[test]
    fn witness_for_single_atom() {
        let params = ExclusionParams::new(0.1, 1.0, 10.0, Metric::Euclidean).unwrap();
        let t = witness_radius_search(&unit_atom, &CPoint::c1_parts(0.05, 0.0), &params).unwrap();
        assert_eq!(t, Some(0.05));
        let t = witness_radius_search(&unit_atom, &CPoint::c1_parts(0.2, 0.0), &params).unwrap();
        assert_eq!(t, None);
        let zero = |_: &CPoint, _: f64| Ok(0.0);
        assert_eq!(witness_radius_search(&zero, &CPoint::c1_parts(0.0, 0.0), &params).unwrap(), None);
    }

    #[test]
    fn expansion_must_match_metric() {
        let mut p = ExclusionParams::new(0.1, 1.0, 10.0, Metric::Euclidean).unwrap();
        p.expansion = 3.0;
        assert!(p.validate().is_err());
        assert!(ExclusionParams::new(1.5, 1.0, 1.0, Metric::Euclidean).is_err());
        assert!(ExclusionParams::new(0.1, 2.5, 1.0, Metric::Euclidean).is_err());
    }

    #[test]
    fn mass_free_potential_has_no_exceptional_set() {
        let params = ExclusionParams::lelong_class(0.2, 1.0).unwrap();
        let samples: Vec<_> = (0..20).map(|k| CPoint::c1_parts(0.1 * k as f64 - 1.0, 0.3)).collect();
        let zero = |_: &CPoint, _: f64| Ok(0.0);
        let rep = exclusion_cover(&zero, &samples, &params, 1.0, 2.0).unwrap();
        assert_eq!(rep.bad_count(), 0);
        assert!(rep.expanded_cover.is_empty());
        assert_eq!(rep.content_sum, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn rejects_samples_outside_domain() {
        let params = ExclusionParams::lelong_class(0.2, 1.0).unwrap();
        let zero = |_: &CPoint, _: f64| Ok(0.0);
        assert!(exclusion_cover(&zero, &[CPoint::c1_parts(3.0, 0.0)], &params, 1.0, 2.0).is_err());
    }
}

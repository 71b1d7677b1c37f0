//! Plurisubharmonic functions with projective-mass oracles.
//!
//! A concrete function implements [`Psh`]. Wrapping it in a [`PshOracle`] attaches a sphere
//! quadrature and a log-step, so that `theta` and Riesz masses are always available: exactly
//! when the function provides them, otherwise from the derivative of sphere means.

mod analysis;
mod atomic;
mod quadrature;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ball::pseudo_ball_hull;
use crate::cover::{Metric, MetricBall};
use crate::error::{domain, Result};
use crate::exclusion::ThetaOracle;
use crate::point::{CPoint, LogValue};

pub use analysis::{
    integrate_dt_over_t, lelong_number, normalize_log_class, poisson_jensen_residual, representation_residual,
    riesz_mass_grid, robin_mean, sphere_mean, theta_from_sphere_means, LelongEstimate, RobinEstimate,
    DEFAULT_ROBIN_RADII,
};
pub use atomic::{
    discrete_potential, log_poly_potential, Atom, AtomicMeasure, DiscretePotential, FactoredPoly, Factor,
    FnPotential, MultiPoly, Polynomial, PolyPotential,
};
pub use quadrature::{SphereQuadrature, DEFAULT_NODES, DEFAULT_NODES_1D, DEFAULT_SEED};

/// Default log-radius step for `theta` from sphere means.
pub const DEFAULT_LOG_STEP: f64 = 0.05;

/// How an oracle's projective masses are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    /// Counting sums over the atoms of a measure in C^1.
    #[serde(rename = "EXACT_ATOMIC_1D")]
    ExactAtomic1d,
    /// Counting sums over the poles of a Green potential of the disc.
    ExactAtomicGreen,
    /// Finite differences of quadrature sphere means.
    NumericSphereMean,
}

/// A plurisubharmonic function on (an open subset of) C^n.
pub trait Psh: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    /// Value at `z`; callers guarantee `z.dim() == self.dim()`.
    fn eval(&self, z: &CPoint) -> LogValue;

    fn provenance(&self) -> Provenance {
        Provenance::NumericSphereMean
    }

    /// Exact projective mass `theta(z, t)` when the function knows it.
    fn exact_theta(&self, _z: &CPoint, _t: f64) -> Option<f64> {
        None
    }

    /// Radii where `theta(z, .)` jumps, for exact step-function oracles.
    fn theta_breakpoints(&self, _z: &CPoint) -> Vec<f64> {
        Vec::new()
    }

    /// Exact invariant projective mass on pseudo-balls, when known.
    fn exact_invariant_theta(&self, _z: &CPoint, _t: f64) -> Option<f64> {
        None
    }

    fn invariant_breakpoints(&self, _z: &CPoint) -> Vec<f64> {
        Vec::new()
    }

    /// Total projective mass at infinity, when known.
    fn total_mass(&self) -> Option<f64> {
        None
    }

    /// `z -> factor * f(r z) + offset` in closed form, when the function supports it.
    fn affine_pullback(&self, _r: f64, _factor: f64, _offset: f64) -> Option<Arc<dyn Psh>> {
        None
    }
}

/// Volume of the unit ball of R^(2n-2): `pi^(n-1) / (n-1)!`.
pub fn tau(n: usize) -> f64 {
    let k = n.saturating_sub(1);
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    std::f64::consts::PI.powi(k as i32) / fact
}

/// A psh function together with the numerical machinery to query it.
#[derive(Clone)]
pub struct PshOracle {
    inner: Arc<dyn Psh>,
    quad: Arc<SphereQuadrature>,
    log_step: f64,
    shift: f64,
}

impl fmt::Debug for PshOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PshOracle")
            .field("inner", &self.inner)
            .field("nodes", &self.quad.node_count())
            .field("log_step", &self.log_step)
            .field("shift", &self.shift)
            .finish()
    }
}

impl PshOracle {
    /// Wraps `f` with the shared default quadrature of its dimension.
    pub fn new<P: Psh + 'static>(f: P) -> Result<Self> {
        Self::from_arc(Arc::new(f))
    }

    pub fn from_arc(inner: Arc<dyn Psh>) -> Result<Self> {
        let quad = SphereQuadrature::shared_default(inner.dim())?;
        Ok(PshOracle { inner, quad, log_step: DEFAULT_LOG_STEP, shift: 0.0 })
    }

    pub fn with_quadrature(mut self, quad: Arc<SphereQuadrature>) -> Result<Self> {
        if quad.dim() != self.dim() {
            return Err(domain!("quadrature dimension {} differs from oracle dimension {}", quad.dim(), self.dim()));
        }
        self.quad = quad;
        Ok(self)
    }

    pub fn with_log_step(mut self, h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(domain!("log step must lie in (0,1), got {h}"));
        }
        self.log_step = h;
        Ok(self)
    }

    /// `z -> factor * V(r z) + offset`, keeping exact oracles when the function offers a
    /// closed form and falling back to a closure otherwise.
    pub fn affine_pullback(&self, r: f64, factor: f64, offset: f64) -> Result<PshOracle> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(domain!("pullback radius must be positive, got {r}"));
        }
        if !(factor > 0.0 && factor.is_finite()) || !offset.is_finite() {
            return Err(domain!("pullback needs a positive factor and finite offset"));
        }
        let offset = offset + factor * self.shift;
        let inner: Arc<dyn Psh> = match self.inner.affine_pullback(r, factor, offset) {
            Some(p) => p,
            None => {
                let f = self.inner.clone();
                Arc::new(FnPotential::new(self.dim(), format!("pullback of {f:?}"), move |z: &CPoint| {
                    f.eval(&z.scale_real(r)).scale(factor).shift(offset)
                }))
            }
        };
        Ok(PshOracle { inner, quad: self.quad.clone(), log_step: self.log_step, shift: 0.0 })
    }

    /// The same function plus the constant `c`; masses are unchanged.
    pub fn shifted(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.shift += c;
        out
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn provenance(&self) -> Provenance {
        self.inner.provenance()
    }

    pub fn quadrature(&self) -> &Arc<SphereQuadrature> {
        &self.quad
    }

    pub fn log_step(&self) -> f64 {
        self.log_step
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn inner(&self) -> &Arc<dyn Psh> {
        &self.inner
    }

    pub fn total_mass(&self) -> Option<f64> {
        self.inner.total_mass()
    }

    pub fn eval(&self, z: &CPoint) -> Result<LogValue> {
        z.check_dim(self.dim())?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: &CPoint) -> LogValue {
        self.inner.eval(z).shift(self.shift)
    }

    /// Projective mass `theta(z, t)`: exact when available, otherwise from sphere means.
    pub fn theta(&self, z: &CPoint, t: f64) -> Result<f64> {
        z.check_dim(self.dim())?;
        if !(t > 0.0) {
            return Err(domain!("theta needs a positive radius, got {t}"));
        }
        match self.inner.exact_theta(z, t) {
            Some(v) => Ok(v),
            None => theta_from_sphere_means(self, z, t, &self.quad, self.log_step),
        }
    }

    pub fn theta_breakpoints(&self, z: &CPoint) -> Vec<f64> {
        self.inner.theta_breakpoints(z)
    }

    /// Riesz mass `mu_V(b)` with `mu_V = Delta V / (2 pi)`.
    ///
    /// Euclidean balls use `mu(B(a, r)) = tau_(2n-2) r^(2n-2) theta(a, r)`. Pseudo-balls in C^1
    /// are discs, handled the same way; in higher dimension they fall back to a grid
    /// Laplacian.
    pub fn mass(&self, b: &MetricBall) -> Result<f64> {
        b.center.check_dim(self.dim())?;
        let n = self.dim();
        match b.metric {
            Metric::Euclidean => Ok(tau(n) * b.radius.powi(2 * n as i32 - 2) * self.theta(&b.center, b.radius)?),
            Metric::Invariant if n == 1 => {
                let (c, r) = pseudo_ball_hull(&b.center, b.radius);
                self.theta(&c, r)
            }
            Metric::Invariant => riesz_mass_grid(self, b, 24),
        }
    }
}

impl ThetaOracle for PshOracle {
    fn theta(&self, z: &CPoint, t: f64) -> Result<f64> {
        PshOracle::theta(self, z, t)
    }

    fn breakpoints(&self, z: &CPoint) -> Result<Vec<f64>> {
        Ok(self.theta_breakpoints(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn tau_values() {
        assert_abs_diff_eq!(tau(1), 1.0);
        assert_abs_diff_eq!(tau(2), std::f64::consts::PI);
        assert_abs_diff_eq!(tau(3), std::f64::consts::PI.powi(2) / 2.0);
    }
}

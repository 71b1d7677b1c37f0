//! Involutive automorphisms of the unit ball and the invariant distance.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::point::CPoint;

/// The involution `Phi_z` of the unit ball exchanging `z` and the origin:
///
/// ```text
/// Phi_z(w) = (z - P_z w - s_z Q_z w) / (1 - <w, z>),   s_z = sqrt(1 - |z|^2)
/// ```
///
/// where `P_z` projects onto the complex line through `z` and `Q_z = I - P_z`.
/// For `z = 0` this is `w -> -w`.
#[derive(Clone, Debug)]
pub struct MoebiusMap {
    base: CPoint,
    base_norm_sqr: f64,
    s: f64,
}

impl MoebiusMap {
    pub fn new(base: &CPoint) -> Result<Self> {
        let base_norm_sqr = base.norm_sqr();
        if base_norm_sqr >= 1.0 {
            return Err(domain!("Moebius base point must satisfy |z| < 1, got |z| = {}", base_norm_sqr.sqrt()));
        }
        Ok(MoebiusMap {
            base: base.clone(),
            base_norm_sqr,
            s: (1.0 - base_norm_sqr).sqrt(),
        })
    }

    pub fn base(&self) -> &CPoint {
        &self.base
    }

    /// Applies the map. Defined wherever `<w, z> != 1`, in particular on the closed ball.
    pub fn apply(&self, w: &CPoint) -> CPoint {
        debug_assert_eq!(w.dim(), self.base.dim());
        let wz = w.inner(&self.base);
        let denom = Complex64::new(1.0, 0.0) - wz;
        if self.base_norm_sqr == 0.0 {
            return CPoint::from_vec(w.coords().iter().map(|c| -c / denom).collect());
        }
        // P_z w = (<w,z>/|z|^2) z
        let coef = wz / self.base_norm_sqr;
        let out = self
            .base
            .coords()
            .iter()
            .zip(w.coords())
            .map(|(zi, wi)| {
                let p = coef * zi;
                let q = wi - p;
                (zi - p - q * self.s) / denom
            })
            .collect();
        CPoint::from_vec(out)
    }
}

/// `Phi_z(w)` for a single evaluation.
pub fn moebius_apply(z: &CPoint, w: &CPoint) -> Result<CPoint> {
    z.check_dim(w.dim())?;
    Ok(MoebiusMap::new(z)?.apply(w))
}

/// Invariant (pseudo-hyperbolic) distance `d_B(z, w) = |Phi_z(w)|` on the open unit ball.
pub fn invariant_distance(z: &CPoint, w: &CPoint) -> Result<f64> {
    z.check_dim(w.dim())?;
    if w.norm_sqr() >= 1.0 {
        return Err(domain!("invariant distance needs both points in the open unit ball"));
    }
    Ok(MoebiusMap::new(z)?.apply(w).norm().min(1.0))
}

/// Bergman distance recovered from `d_B = tanh(rho / sqrt(n + 1))`. Reporting only.
pub fn bergman_distance(z: &CPoint, w: &CPoint) -> Result<f64> {
    let d = invariant_distance(z, w)?;
    Ok(d.atanh() * ((z.dim() + 1) as f64).sqrt())
}

/// Smallest Euclidean ball containing the pseudo-ball `{w : d_B(z, w) <= r}`.
///
/// The pseudo-ball is an ellipsoid centred at `(1 - r^2) z / (1 - r^2 |z|^2)` with semi-axis
/// `r (1 - |z|^2) / (1 - r^2 |z|^2)` along `z` and `r sqrt((1 - |z|^2) / (1 - r^2 |z|^2))`
/// in the orthogonal directions; in C^1 only the first one exists.
pub fn pseudo_ball_hull(z: &CPoint, r: f64) -> (CPoint, f64) {
    let a2 = z.norm_sqr();
    let denom = 1.0 - r * r * a2;
    let center = z.scale_real((1.0 - r * r) / denom);
    let along = r * (1.0 - a2) / denom;
    let radius = if z.dim() == 1 {
        along
    } else {
        along.max(r * ((1.0 - a2) / denom).sqrt())
    };
    (center, radius)
}

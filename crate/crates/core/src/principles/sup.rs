//! Sup of a function over origin-centred spheres, by boundary sampling.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::point::{CPoint, LogValue};
use crate::potentials::{PshOracle, SphereQuadrature, DEFAULT_SEED};

pub const SUP_NODES_1D: usize = 4096;
pub const SUP_NODES: usize = 100_000;

const REFINE_CANDIDATES: usize = 8;
const GOLDEN_STEPS: usize = 48;

/// Max of `f` over `|z| = r` in C: equispaced samples refined by golden-section search on
/// the angle around the best few nodes.
pub fn circle_sup<F: Fn(Complex64) -> f64>(f: F, r: f64, nodes: usize) -> f64 {
    let step = std::f64::consts::TAU / nodes as f64;
    let at = |t: f64| f(Complex64::from_polar(r, t));
    let mut vals: Vec<(f64, f64)> = (0..nodes).map(|k| (k as f64 * step, at(k as f64 * step))).collect();
    let mut best = vals.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
    vals.sort_by(|a, b| b.1.total_cmp(&a.1));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for &(t0, _) in vals.iter().take(REFINE_CANDIDATES) {
        let (mut a, mut b) = (t0 - step, t0 + step);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (at(c), at(d));
        for _ in 0..GOLDEN_STEPS {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = at(d);
            }
        }
        best = best.max(fc).max(fd);
    }
    best
}

/// Sampled `max_{|z| = r} V`. The sphere is sampled with the quadrature nodes in C^n
/// (`SUP_NODES` of them for n >= 2) and refined along the circle in C.
pub fn sphere_sup(v: &PshOracle, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(domain!("sup radius must be positive, got {r}"));
    }
    let to_f64 = |x: LogValue| x.finite().unwrap_or(f64::NEG_INFINITY);
    let best = if v.dim() == 1 {
        circle_sup(|z| to_f64(v.eval_unchecked(&CPoint::c1(z))), r, SUP_NODES_1D)
    } else {
        let quad: Arc<SphereQuadrature> = SphereQuadrature::shared(v.dim(), SUP_NODES, DEFAULT_SEED)?;
        let mut best = f64::NEG_INFINITY;
        for k in 0..quad.node_count() {
            let p = quad.node(k).scale_real(r);
            best = best.max(to_f64(v.eval_unchecked(&p)));
        }
        best
    };
    if !best.is_finite() {
        return Err(domain!("function is not finite anywhere on the sphere of radius {r}"));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn refined_max_is_sharp() {
        let f = |z: Complex64| -((z - Complex64::from_polar(1.0, 0.123_456)).norm());
        assert_abs_diff_eq!(circle_sup(f, 1.0, 64), 0.0, epsilon = 1e-12);
    }
}

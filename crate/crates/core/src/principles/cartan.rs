//! Cartan's grouping of polynomial zeros into exceptional discs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cover::{BallCover, MetricBall};
use crate::error::{domain, Error, Result};
use crate::point::CPoint;

const COUNT_TOL: f64 = 1e-12;

/// One step of the construction: `lambda` zeros grouped in a disc of radius `phi(lambda)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanGroup {
    pub center: Complex64,
    pub lambda: usize,
    pub phi: f64,
    pub radius: f64,
}

/// Discs outside which `|P| > eps^d` for the monic `P` with the given zeros.
///
/// With `phi(l) = eps e^(1/alpha) (l / d)^(1/alpha)` the construction repeatedly picks the
/// largest `l` such that some disc of radius `phi(l)` holds `l` remaining zeros, removes
/// them, and emits a concentric disc of radius `phi(l) + spread`, where the spread (at most
/// `phi(l)`) is the distance of the farthest removed zero. The `l` sum to `d`, so
/// `sum r^alpha <= e (2 eps)^alpha`; for `alpha = 1` this is `sum r <= 2 e eps`.
///
/// The maximal disc is found exactly: an optimal disc can be moved until it is centred at a
/// zero or has two zeros on its boundary.
pub fn cartan_groups(roots: &[Complex64], epsilon: f64, alpha: f64) -> Result<Vec<CartanGroup>> {
    if roots.is_empty() {
        return Err(Error::Empty("root list"));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(domain!("epsilon must be positive, got {epsilon}"));
    }
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(domain!("alpha must lie in (0,2], got {alpha}"));
    }
    if roots.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(domain!("roots must be finite"));
    }
    let d = roots.len() as f64;
    let phi = |l: usize| epsilon * (1.0 / alpha).exp() * (l as f64 / d).powf(1.0 / alpha);
    let mut remaining: Vec<Complex64> = roots.to_vec();
    let mut groups = Vec::new();
    while !remaining.is_empty() {
        let mut found = None;
        for l in (1..=remaining.len()).rev() {
            if let Some(c) = disc_with_count(&remaining, phi(l), l) {
                found = Some((l, c));
                break;
            }
        }
        let (l, c) = found.expect("a single zero always fits");
        let rho = phi(l);
        let mut spread: f64 = 0.0;
        let mut taken = 0;
        remaining.retain(|&a| {
            if taken < l && (a - c).norm() <= rho * (1.0 + COUNT_TOL) {
                taken += 1;
                spread = spread.max((a - c).norm());
                false
            } else {
                true
            }
        });
        groups.push(CartanGroup { center: c, lambda: l, phi: rho, radius: rho + spread.min(rho) });
    }
    Ok(groups)
}

pub fn cartan_cover(roots: &[Complex64], epsilon: f64, alpha: f64) -> Result<BallCover> {
    let balls = cartan_groups(roots, epsilon, alpha)?
        .into_iter()
        .map(|g| MetricBall::euclidean(CPoint::c1(g.center), g.radius))
        .collect::<Result<Vec<_>>>()?;
    BallCover::new(balls, None)
}

/// A centre of a disc of radius `rho` holding at least `k` of `pts`, if one exists.
fn disc_with_count(pts: &[Complex64], rho: f64, k: usize) -> Option<Complex64> {
    let lim = rho * (1.0 + COUNT_TOL);
    let count = |c: Complex64| pts.iter().filter(|&&p| (p - c).norm() <= lim).count();
    for &p in pts {
        if count(p) >= k {
            return Some(p);
        }
    }
    if k == 1 {
        return None;
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (a, b) = (pts[i], pts[j]);
            let half = (b - a) * 0.5;
            let h2 = half.norm_sqr();
            if h2 == 0.0 || h2 > lim * lim {
                continue;
            }
            let mid = a + half;
            let off = (rho * rho - h2).max(0.0).sqrt() / h2.sqrt();
            let perp = Complex64::new(-half.im, half.re) * off;
            for c in [mid + perp, mid - perp] {
                if count(c) >= k {
                    return Some(c);
                }
            }
        }
    }
    None
}

/// Result of checking `|P| >= eps^d` on a grid outside a cover.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemniscateCheck {
    pub checked: usize,
    pub inside_cover: usize,
    pub violations: usize,
    /// Smallest `|P(z)| / eps^d` over checked points outside the cover.
    pub min_ratio: f64,
}

impl LemniscateCheck {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `prod |z - a_k| >= eps^d` at the points of a `resolution x resolution` grid over
/// `[-half_width, half_width]^2` (endpoints included) lying outside every disc of `cover`.
pub fn check_lemniscate_cover(
    roots: &[Complex64],
    epsilon: f64,
    cover: &BallCover,
    resolution: usize,
    half_width: f64,
) -> Result<LemniscateCheck> {
    if resolution < 2 {
        return Err(domain!("grid resolution must be at least 2"));
    }
    if cover.balls.iter().any(|b| b.center.dim() != 1 || b.metric != crate::cover::Metric::Euclidean) {
        return Err(domain!("lemniscate covers must be Euclidean discs in C"));
    }
    let target = epsilon.powi(roots.len() as i32);
    let discs: Vec<(Complex64, f64)> = cover.balls.iter().map(|b| (b.center.z(), b.radius)).collect();
    let step = 2.0 * half_width / (resolution - 1) as f64;
    let mut out = LemniscateCheck { checked: 0, inside_cover: 0, violations: 0, min_ratio: f64::INFINITY };
    for i in 0..resolution {
        for j in 0..resolution {
            let z = Complex64::new(-half_width + i as f64 * step, -half_width + j as f64 * step);
            if discs.iter().any(|&(c, r)| (z - c).norm() <= r) {
                out.inside_cover += 1;
                continue;
            }
            out.checked += 1;
            let p: f64 = roots.iter().map(|&a| (z - a).norm()).product();
            out.min_ratio = out.min_ratio.min(p / target);
            if p < target {
                out.violations += 1;
            }
        }
    }
    Ok(out)
}

/// True iff every grid point outside the cover has `|P| >= eps^d`.
pub fn verify_lemniscate_cover(
    roots: &[Complex64],
    epsilon: f64,
    cover: &BallCover,
    resolution: usize,
    half_width: f64,
) -> Result<bool> {
    Ok(check_lemniscate_cover(roots, epsilon, cover, resolution, half_width)?.ok())
}

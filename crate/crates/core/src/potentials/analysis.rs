//! Sphere means and the quantities derived from them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{PshOracle, SphereQuadrature};
use crate::cover::{Metric, MetricBall};
use crate::ball::{adaptive_simpson, pseudo_ball_hull};
use crate::error::{domain, Error, Result};
use crate::point::{CPoint, LogValue};

pub const DEFAULT_ROBIN_RADII: [f64; 3] = [1e2, 1e3, 1e4];

/// `int V(center + r xi) d sigma(xi)` by the given quadrature.
pub fn sphere_mean(v: &PshOracle, center: &CPoint, r: f64, quad: &SphereQuadrature) -> Result<f64> {
    center.check_dim(v.dim())?;
    if quad.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), got: quad.dim() });
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain!("sphere radius must be positive, got {r}"));
    }
    quad.mean(center, r, |z| v.eval_unchecked(z))
}

/// `theta(z, t) = t d/dt m(t)` by a central difference in `log t`:
/// `(m(t e^h) - m(t e^-h)) / (2h)`.
pub fn theta_from_sphere_means(v: &PshOracle, z: &CPoint, t: f64, quad: &SphereQuadrature, h: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(domain!("theta needs a positive radius, got {t}"));
    }
    if !(h > 0.0) {
        return Err(domain!("log step must be positive, got {h}"));
    }
    let up = sphere_mean(v, z, t * h.exp(), quad)?;
    let down = sphere_mean(v, z, t * (-h).exp(), quad)?;
    Ok((up - down) / (2.0 * h))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LelongEstimate {
    pub value: f64,
    pub radii: Vec<f64>,
    pub maxima: Vec<f64>,
    /// `max_{|z-a|=r} V / log r` for every radius.
    pub ratios: Vec<f64>,
}

/// Lelong number at `a` from sampled sphere maxima `M(r)`.
///
/// The ratio `M(r) / log r` converges slowly because of the additive constant in
/// `M(r) = nu log r + O(1)`; the reported value is the slope of `M` against `log r` between
/// the two smallest radii, which removes it.
pub fn lelong_number(v: &PshOracle, a: &CPoint, r_seq: &[f64]) -> Result<LelongEstimate> {
    a.check_dim(v.dim())?;
    if r_seq.len() < 3 {
        return Err(domain!("need at least 3 radii, got {}", r_seq.len()));
    }
    if r_seq.iter().any(|&r| !(r > 0.0 && r < 1.0)) || r_seq.windows(2).any(|w| w[1] >= w[0]) {
        return Err(domain!("radii must be decreasing in (0,1)"));
    }
    let quad = v.quadrature();
    let mut maxima = Vec::with_capacity(r_seq.len());
    for &r in r_seq {
        let m = quad
            .nodes()
            .map(|xi| v.eval_unchecked(&(a + &xi.scale_real(r))))
            .fold(LogValue::NegInfinity, LogValue::max);
        let m = m
            .finite()
            .ok_or_else(|| Error::Degenerate(format!("V is -inf on the whole sphere of radius {r}")))?;
        maxima.push(m);
    }
    let ratios: Vec<f64> = maxima.iter().zip(r_seq).map(|(m, r)| m / r.ln()).collect();
    let k = r_seq.len() - 1;
    let value = (maxima[k] - maxima[k - 1]) / (r_seq[k].ln() - r_seq[k - 1].ln());
    Ok(LelongEstimate { value, radii: r_seq.to_vec(), maxima, ratios })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobinEstimate {
    pub value: f64,
    /// `(R, m(R) - log R)` for every radius.
    pub sequence: Vec<(f64, f64)>,
    /// Difference between the last two terms.
    pub error_bar: f64,
}

/// Growth of `m(R) - log R` tolerated before a function is declared outside the Lelong class.
const LELONG_GROWTH_TOL: f64 = 1e-3;

/// `m(R) - log R` at the largest radius, where `m` is the sphere mean about the origin.
///
/// On the Lelong class `theta(0, t) <= 1`, so `m(R) - log R` is nonincreasing; a sequence
/// that grows signals a function outside the class.
pub fn robin_mean(v: &PshOracle, r_seq: &[f64], quad: &SphereQuadrature) -> Result<RobinEstimate> {
    if r_seq.is_empty() || r_seq.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain!("Robin radii must be nonempty and increasing"));
    }
    let last = *r_seq.last().expect("nonempty");
    if last < 1e3 {
        return Err(domain!("largest Robin radius must be at least 1e3, got {last}"));
    }
    let o = CPoint::origin(v.dim());
    let mut sequence = Vec::with_capacity(r_seq.len());
    for &r in r_seq {
        sequence.push((r, sphere_mean(v, &o, r, quad)? - r.ln()));
    }
    for w in sequence.windows(2) {
        if w[1].1 > w[0].1 + LELONG_GROWTH_TOL * (1.0 + w[0].1.abs()) {
            return Err(domain!(
                "sphere means grow faster than log R (m - log R goes from {} to {}): not in the Lelong class",
                w[0].1,
                w[1].1
            ));
        }
    }
    let value = sequence.last().expect("nonempty").1;
    let error_bar = if sequence.len() > 1 { (value - sequence[sequence.len() - 2].1).abs() } else { 0.0 };
    Ok(RobinEstimate { value, sequence, error_bar })
}

/// `V - robin_mean(V)`: the representative of `V` with zero Robin mean.
pub fn normalize_log_class(v: &PshOracle, quad: &SphereQuadrature) -> Result<PshOracle> {
    let r = robin_mean(v, &DEFAULT_ROBIN_RADII, quad)?;
    Ok(v.shifted(-r.value))
}

const SIMPSON_MAX_DEPTH: u32 = 30;

/// `int_r^R theta(z, t) dt / t`.
///
/// Exact step-function oracles are integrated piece by piece between breakpoints, using the
/// value at the log-midpoint of each piece. Other oracles use adaptive Simpson in `log t`.
pub fn integrate_dt_over_t(v: &PshOracle, z: &CPoint, r: f64, big_r: f64, tol: f64) -> Result<f64> {
    if !(r > 0.0 && r < big_r) {
        return Err(domain!("need 0 < r < R, got r = {r}, R = {big_r}"));
    }
    let (a, b) = (r.ln(), big_r.ln());
    let breaks = v.theta_breakpoints(z);
    if v.inner().exact_theta(z, big_r).is_some() {
        let mut cuts: Vec<f64> = breaks.into_iter().filter(|&t| t > r && t < big_r).map(f64::ln).collect();
        cuts.push(a);
        cuts.push(b);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut acc = 0.0;
        for w in cuts.windows(2) {
            let mid = (0.5 * (w[0] + w[1])).exp();
            acc += v.theta(z, mid)? * (w[1] - w[0]);
        }
        return Ok(acc);
    }
    let f = |u: f64| v.theta(z, u.exp());
    adaptive_simpson(&f, a, b, tol, SIMPSON_MAX_DEPTH)
}

/// `|(m(R) - m(r)) - int_r^R theta(0, t) dt / t|` with sphere means about the origin.
pub fn poisson_jensen_residual(v: &PshOracle, r: f64, big_r: f64, quad: &SphereQuadrature) -> Result<f64> {
    let o = CPoint::origin(v.dim());
    let lhs = sphere_mean(v, &o, big_r, quad)? - sphere_mean(v, &o, r, quad)?;
    let rhs = integrate_dt_over_t(v, &o, r, big_r, 1e-10)?;
    Ok((lhs - rhs).abs())
}

/// Discrepancy between `V(z)` and its reconstruction from the mean on the sphere of radius
/// `R` about `z` and the measure inside:
///
/// ```text
/// V(z) = m_z(R) - theta(z, R) log R + int_0^R log t d theta(z, t)
/// ```
///
/// For exact atomic oracles the Stieltjes integral is the sum of jumps times `log t`. Other
/// oracles integrate by parts, `int_0^R log t d theta = theta(R) log R - int_0^R theta dt/t`,
/// truncating at `R * 1e-6`.
pub fn representation_residual(v: &PshOracle, z: &CPoint, quad: &SphereQuadrature, r_max: f64) -> Result<f64> {
    let vz = v
        .eval(z)?
        .finite()
        .ok_or_else(|| domain!("representation formula needs V(z) > -inf, but z = {z} is a pole"))?;
    if !(r_max > 0.0) {
        return Err(domain!("outer radius must be positive, got {r_max}"));
    }
    let m = sphere_mean(v, z, r_max, quad)?;
    if v.inner().exact_theta(z, r_max).is_some() {
        let mut breaks: Vec<f64> = v.theta_breakpoints(z).into_iter().filter(|&t| t <= r_max).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let mut stieltjes = 0.0;
        let mut prev = 0.0;
        for &b in &breaks {
            if b == 0.0 {
                return Err(domain!("z = {z} carries an atom"));
            }
            let below = v.theta(z, 0.5 * (prev + b))?;
            stieltjes += (v.theta(z, b)? - below) * b.ln();
            prev = b;
        }
        let recon = m - v.theta(z, r_max)? * r_max.ln() + stieltjes;
        return Ok((vz - recon).abs());
    }
    let inner = integrate_dt_over_t(v, z, r_max * 1e-6, r_max, 1e-8)?;
    Ok((vz - (m - inner)).abs())
}

/// Riesz mass `Delta V / (2 pi)` of a ball by a midpoint grid with `cells` cells per real
/// axis over the ball's bounding box and a central-difference Laplacian.
///
/// Meant for smooth functions: cells where `V = -inf` are skipped. A cross-check only.
pub fn riesz_mass_grid(v: &PshOracle, b: &MetricBall, cells: usize) -> Result<f64> {
    b.center.check_dim(v.dim())?;
    if cells < 2 {
        return Err(domain!("need at least 2 cells per axis"));
    }
    let (c, rad) = match b.metric {
        Metric::Euclidean => (b.center.clone(), b.radius),
        Metric::Invariant => pseudo_ball_hull(&b.center, b.radius),
    };
    let d = 2 * v.dim();
    let h = 2.0 * rad / cells as f64;
    let origin: Vec<f64> = c.to_real().iter().map(|x| x - rad).collect();
    let total = cells.pow(d as u32);
    let parts: Vec<Result<f64>> = (0..total)
        .into_par_iter()
        .with_min_len(1024)
        .map(|mut idx| {
            let mut x = vec![0.0; d];
            for xi in x.iter_mut().zip(&origin) {
                *xi.0 = xi.1 + ((idx % cells) as f64 + 0.5) * h;
                idx /= cells;
            }
            let p = CPoint::from_real(&x)?;
            if !b.contains(&p)? {
                return Ok(0.0);
            }
            let Some(v0) = v.eval_unchecked(&p).finite() else { return Ok(0.0) };
            let mut lap = 0.0;
            for k in 0..d {
                let mut y = x.clone();
                y[k] = x[k] + h;
                let up = v.eval_unchecked(&CPoint::from_real(&y)?).finite();
                y[k] = x[k] - h;
                let down = v.eval_unchecked(&CPoint::from_real(&y)?).finite();
                match (up, down) {
                    (Some(u), Some(w)) => lap += (u + w - 2.0 * v0) / (h * h),
                    _ => return Ok(0.0),
                }
            }
            Ok(lap)
        })
        .collect();
    let mut sum = 0.0;
    for p in parts {
        sum += p?;
    }
    Ok(sum * h.powi(d as i32) / (2.0 * std::f64::consts::PI))
}

//! Minimum modulus of entire functions in one variable, checked on polynomials.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::potentials::{FactoredPoly, Provenance};
use crate::report::{HarnessReport, Verdict};

use super::cartan::cartan_groups;
use super::constants::h_constant;
use super::sup::{circle_sup, SUP_NODES_1D};

const NORMALIZATION_TOL: f64 = 1e-12;
const BOUND_TOL: f64 = 1e-12;

/// Checks `log|f(z)| > -H(eta) log M_f(2eR)` on a grid of `|z| <= R`, outside discs with
/// radii summing to at most `2 eta R`, for a polynomial `f` with `f(0) = 1`.
///
/// The discs are the Cartan discs of the zeros in `|z| <= 2R` at level `eps = eta R / e`.
pub fn min_modulus_1d(f: &FactoredPoly, radius: f64, eta: f64, resolution: usize) -> Result<HarnessReport> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(domain!("R must be positive, got {radius}"));
    }
    let h = h_constant(eta)?;
    if resolution < 2 {
        return Err(domain!("grid resolution must be at least 2"));
    }
    let f0 = f.eval(Complex64::new(0.0, 0.0));
    if (f0 - 1.0).norm() > NORMALIZATION_TOL {
        return Err(domain!("f must satisfy f(0) = 1, got f(0) = {f0}"));
    }
    let log_abs = |z: Complex64| f.log_abs(z).finite().unwrap_or(f64::NEG_INFINITY);
    let e = std::f64::consts::E;
    let log_m = circle_sup(log_abs, 2.0 * e * radius, SUP_NODES_1D);
    let bound = -h * log_m;

    let near: Vec<Complex64> = f.roots().into_iter().filter(|a| a.norm() <= 2.0 * radius).collect();
    let eps = eta * radius / e;
    let discs: Vec<(Complex64, f64)> = if near.is_empty() {
        Vec::new()
    } else {
        cartan_groups(&near, eps, 1.0)?.into_iter().map(|g| (g.center, g.radius)).collect()
    };
    let radii_sum: f64 = discs.iter().map(|d| d.1).sum();

    let step = 2.0 * radius / (resolution - 1) as f64;
    let (mut checked, mut excluded, mut violations) = (0usize, 0usize, 0usize);
    let mut worst_margin = f64::INFINITY;
    for i in 0..resolution {
        for j in 0..resolution {
            let z = Complex64::new(-radius + i as f64 * step, -radius + j as f64 * step);
            if z.norm() > radius {
                continue;
            }
            if discs.iter().any(|&(c, r)| (z - c).norm() <= r) {
                excluded += 1;
                continue;
            }
            checked += 1;
            let margin = log_abs(z) - bound;
            worst_margin = worst_margin.min(margin);
            if margin < -BOUND_TOL {
                violations += 1;
            }
        }
    }

    let paper_bound = 2.0 * eta * radius;
    let mut r = HarnessReport::new("min_modulus_1d").param("R", radius).param("eta", eta);
    r.constant("H", h);
    r.constant("log_M", log_m);
    r.constant("cartan_epsilon", eps);
    r.constant("worst_margin", worst_margin);
    r.count("checked", checked);
    r.count("excluded", excluded);
    r.count("violations", violations);
    r.count("discs", discs.len());
    r.content_sum = radii_sum;
    r.paper_bound = paper_bound;
    r.add_provenance(Provenance::ExactAtomic1d);
    r.series.insert("disc_radii".into(), discs.iter().map(|d| d.1).collect());
    r.verdict = Verdict::from_bool(violations == 0 && radii_sum <= paper_bound * (1.0 + BOUND_TOL));
    Ok(r)
}

//! Closed-form constants of the minimum and maximum principles.

use crate::error::{domain, Result};

/// `H(eta) = log(3 e^3 / (2 eta))` of the one-variable minimum modulus principle.
pub fn h_constant(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(domain!("eta must lie in (0,1), got {eta}"));
    }
    Ok((3.0 * 3f64.exp() / (2.0 * eta)).ln())
}

fn check_sigma_tau(sigma: f64, tau: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma <= tau && tau < 1.0) {
        return Err(domain!("need 0 < sigma <= tau < 1, got sigma = {sigma}, tau = {tau}"));
    }
    Ok(())
}

/// `nu(sigma, tau) = 1 / log((1 + sigma tau) / (sigma + tau))`.
pub fn nu_constant(sigma: f64, tau: f64) -> Result<f64> {
    check_sigma_tau(sigma, tau)?;
    Ok(1.0 / ((1.0 + sigma * tau) / (sigma + tau)).ln())
}

/// `rho(sigma, tau) = log(tau / sigma) / log(1 / sigma)`.
pub fn rho_constant(sigma: f64, tau: f64) -> Result<f64> {
    check_sigma_tau(sigma, tau)?;
    Ok((tau / sigma).ln() / (1.0 / sigma).ln())
}

/// Radius `(sigma + tau) / (1 + sigma tau)` of the smallest origin-centred ball containing
/// `Phi_z(B_sigma)` for every `|z| <= tau`.
pub fn moebius_inclusion_radius(sigma: f64, tau: f64) -> f64 {
    (sigma + tau) / (1.0 + sigma * tau)
}

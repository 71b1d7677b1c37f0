//! Pluricomplex Green function of the ball, the Poisson–Szegő kernel and Green potentials.

use serde::{Deserialize, Serialize};

use super::moebius::{invariant_distance, MoebiusMap};
use crate::error::{domain, Error, Result};
use crate::exclusion::ThetaOracle;
use crate::point::{CPoint, LogValue};
use crate::potentials::{sphere_mean, Atom, Provenance, Psh, PshOracle, SphereQuadrature};

/// `G_z(zeta) = log |Phi_z(zeta)|`, with the sentinel at the pole.
pub fn green_value(z: &CPoint, zeta: &CPoint) -> Result<LogValue> {
    z.check_dim(zeta.dim())?;
    Ok(LogValue::ln(MoebiusMap::new(z)?.apply(zeta).norm()))
}

/// `P(z, zeta) = (1 - |z|^2)^n / |1 - <z, zeta>|^(2n)` for `|z| < 1`, `|zeta| = 1`.
pub fn poisson_szego(z: &CPoint, zeta: &CPoint) -> Result<f64> {
    z.check_dim(zeta.dim())?;
    if z.norm_sqr() >= 1.0 {
        return Err(domain!("Poisson-Szego kernel needs |z| < 1, got {}", z.norm()));
    }
    if (zeta.norm() - 1.0).abs() > 1e-10 {
        return Err(domain!("Poisson-Szego kernel needs |zeta| = 1, got {}", zeta.norm()));
    }
    Ok(poisson_szego_unchecked(z, zeta))
}

pub(crate) fn poisson_szego_unchecked(z: &CPoint, zeta: &CPoint) -> f64 {
    let n = z.dim() as i32;
    let num = (1.0 - z.norm_sqr()).powi(n);
    let den = (num_complex::Complex64::new(1.0, 0.0) - z.inner(zeta)).norm_sqr().powi(n);
    num / den
}

/// `kappa_n(rho) = ((1 + rho) / (1 - rho))^n`, the sup of the kernel over `|z| <= rho`.
pub fn kappa_constant(rho: f64, n: usize) -> Result<f64> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(domain!("rho must lie in (0,1), got {rho}"));
    }
    if n == 0 {
        return Err(domain!("dimension must be at least 1"));
    }
    Ok(((1.0 + rho) / (1.0 - rho)).powi(n as i32))
}

/// Poles and weights of `phi = sum_k w_k G_(a_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec")]
pub struct GreenPotentialSpec {
    pub dimension: usize,
    pub atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawSpec {
    dimension: usize,
    atoms: Vec<Atom>,
}

impl TryFrom<RawSpec> for GreenPotentialSpec {
    type Error = Error;
    fn try_from(r: RawSpec) -> Result<Self> {
        GreenPotentialSpec::new(r.dimension, r.atoms)
    }
}

impl GreenPotentialSpec {
    pub fn new(dimension: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dimension == 0 {
            return Err(domain!("dimension must be at least 1"));
        }
        for a in &atoms {
            a.location.check_dim(dimension)?;
            if a.location.norm() >= 1.0 {
                return Err(domain!("Green poles must lie in the open unit ball, got {}", a.location));
            }
            if !(a.weight > 0.0) || !a.weight.is_finite() {
                return Err(domain!("pole weights must be positive, got {}", a.weight));
            }
        }
        Ok(GreenPotentialSpec { dimension, atoms })
    }

    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }
}

/// `sum_k w_k G_(a_k)` as a psh function.
///
/// In C^1 both projective masses are exact: the Euclidean one sees `+w` at `a` and `-w` at
/// the reflected pole `1 / conj(a)`, the invariant one counts the poles in the pseudo-disc.
#[derive(Clone, Debug)]
pub struct GreenPotential {
    spec: GreenPotentialSpec,
    maps: Vec<(MoebiusMap, f64)>,
}

impl GreenPotential {
    pub fn new(spec: &GreenPotentialSpec) -> Result<Self> {
        let maps = spec
            .atoms
            .iter()
            .map(|a| Ok((MoebiusMap::new(&a.location)?, a.weight)))
            .collect::<Result<_>>()?;
        Ok(GreenPotential { spec: spec.clone(), maps })
    }

    pub fn spec(&self) -> &GreenPotentialSpec {
        &self.spec
    }

    fn reflected_poles(&self) -> impl Iterator<Item = (CPoint, f64)> + '_ {
        self.spec.atoms.iter().filter(|a| a.location.norm_sqr() > 0.0).map(|a| {
            let z = a.location.z();
            (CPoint::c1(1.0 / z.conj()), a.weight)
        })
    }
}

impl Psh for GreenPotential {
    fn dim(&self) -> usize {
        self.spec.dimension
    }

    fn eval(&self, z: &CPoint) -> LogValue {
        self.maps
            .iter()
            .fold(LogValue::Finite(0.0), |acc, (m, w)| acc.plus(LogValue::ln(m.apply(z).norm()).scale(*w)))
    }

    fn provenance(&self) -> Provenance {
        if self.dim() == 1 {
            Provenance::ExactAtomicGreen
        } else {
            Provenance::NumericSphereMean
        }
    }

    fn exact_theta(&self, z: &CPoint, t: f64) -> Option<f64> {
        if self.dim() != 1 {
            return None;
        }
        let plus: f64 = self.spec.atoms.iter().filter(|a| a.location.dist(z) <= t).map(|a| a.weight).sum();
        let minus: f64 = self.reflected_poles().filter(|(b, _)| b.dist(z) <= t).map(|(_, w)| w).sum();
        Some(plus - minus)
    }

    fn theta_breakpoints(&self, z: &CPoint) -> Vec<f64> {
        if self.dim() != 1 {
            return Vec::new();
        }
        let mut v: Vec<f64> = self.spec.atoms.iter().map(|a| a.location.dist(z)).collect();
        v.extend(self.reflected_poles().map(|(b, _)| b.dist(z)));
        v
    }

    fn exact_invariant_theta(&self, z: &CPoint, t: f64) -> Option<f64> {
        if self.dim() != 1 || z.norm() >= 1.0 {
            return None;
        }
        let mut acc = 0.0;
        for a in &self.spec.atoms {
            if invariant_distance(z, &a.location).ok()? <= t {
                acc += a.weight;
            }
        }
        Some(acc)
    }

    fn invariant_breakpoints(&self, z: &CPoint) -> Vec<f64> {
        if self.dim() != 1 {
            return Vec::new();
        }
        self.spec.atoms.iter().filter_map(|a| invariant_distance(z, &a.location).ok()).collect()
    }

    fn total_mass(&self) -> Option<f64> {
        Some(self.spec.total_weight())
    }
}

/// `sum_k w_k G_(a_k)(z)`.
pub fn green_potential(spec: &GreenPotentialSpec, z: &CPoint) -> Result<LogValue> {
    z.check_dim(spec.dimension)?;
    if z.norm() >= 1.0 {
        return Err(domain!("Green potentials live on the open unit ball, got |z| = {}", z.norm()));
    }
    Ok(GreenPotential::new(spec)?.eval(z))
}

/// Oracle for a Green potential with the dimension's default quadrature.
pub fn green_oracle(spec: &GreenPotentialSpec) -> Result<PshOracle> {
    PshOracle::new(GreenPotential::new(spec)?)
}

/// Invariant projective mass `theta_V(z, t) = theta_(V o Phi_z)(0, t)`.
///
/// Exact when the function knows its invariant masses; otherwise a central difference in
/// `log t` of the sphere means of `V o Phi_z` about the origin.
pub fn invariant_theta(v: &PshOracle, z: &CPoint, t: f64, quad: &SphereQuadrature) -> Result<f64> {
    z.check_dim(v.dim())?;
    if z.norm() >= 1.0 {
        return Err(domain!("invariant theta needs |z| < 1, got {}", z.norm()));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(domain!("invariant theta needs t in (0,1), got {t}"));
    }
    if let Some(th) = v.inner().exact_invariant_theta(z, t) {
        return Ok(th);
    }
    numeric_invariant_theta(v, z, t, quad, v.log_step())
}

/// Also accepts `t = 1`, where the outer sphere pokes slightly out of the ball; the
/// function must then be defined on a neighbourhood of the closed ball.
fn numeric_invariant_theta(v: &PshOracle, z: &CPoint, t: f64, quad: &SphereQuadrature, h: f64) -> Result<f64> {
    let map = MoebiusMap::new(z)?;
    let o = CPoint::origin(v.dim());
    let mean = |s: f64| quad.mean(&o, s, |w| v.eval_unchecked(&map.apply(w)));
    Ok((mean(t * h.exp())? - mean(t * (-h).exp())?) / (2.0 * h))
}

/// The invariant projective mass as seen by the exclusion engine.
pub struct InvariantTheta<'a> {
    pub oracle: &'a PshOracle,
}

impl ThetaOracle for InvariantTheta<'_> {
    fn theta(&self, z: &CPoint, t: f64) -> Result<f64> {
        invariant_theta(self.oracle, z, t, self.oracle.quadrature())
    }

    fn breakpoints(&self, z: &CPoint) -> Result<Vec<f64>> {
        Ok(self.oracle.inner().invariant_breakpoints(z))
    }
}

/// `P_V(z) = int P(z, zeta) V(zeta) d sigma(zeta)` over the quadrature nodes.
pub fn poisson_szego_integral(v: &PshOracle, z: &CPoint, quad: &SphereQuadrature) -> Result<f64> {
    z.check_dim(v.dim())?;
    if z.norm() >= 1.0 {
        return Err(domain!("Poisson-Szego integral needs |z| < 1"));
    }
    let mut rejected = 0usize;
    let mut sum = 0.0;
    for xi in quad.nodes() {
        match v.eval_unchecked(&xi) {
            LogValue::Finite(val) => sum += poisson_szego_unchecked(z, &xi) * val,
            LogValue::NegInfinity => rejected += 1,
        }
    }
    if rejected > 0 {
        return Err(Error::Degenerate(format!("{rejected} boundary nodes hit -inf")));
    }
    Ok(sum / quad.node_count() as f64)
}

const JENSEN_LOWER_RADIUS: f64 = 1e-8;

/// `|V(z) - P_V(z) + int_0^1 theta_V(z, t) dt / t|` for `V` smooth near the closed ball.
///
/// The Green term integrates the numeric invariant projective mass by adaptive Simpson in
/// `log t` from `1e-8` to `1`.
pub fn jensen_ps_residual(v: &PshOracle, z: &CPoint, quad: &SphereQuadrature) -> Result<f64> {
    let vz = v
        .eval(z)?
        .finite()
        .ok_or_else(|| domain!("V must be finite at z = {z}"))?;
    let pv = poisson_szego_integral(v, z, quad)?;
    // Richardson extrapolation over the log-step removes the O(h^2) bias of the difference.
    let f = |u: f64| {
        let t = u.exp();
        let coarse = numeric_invariant_theta(v, z, t, quad, v.log_step())?;
        let fine = numeric_invariant_theta(v, z, t, quad, 0.5 * v.log_step())?;
        Ok((4.0 * fine - coarse) / 3.0)
    };
    let (a, b) = (JENSEN_LOWER_RADIUS.ln(), 0.0);
    let green = adaptive_simpson(&f, a, b, 1e-9, 30)?;
    Ok((vz - pv + green).abs())
}

pub(crate) fn adaptive_simpson<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    fn rec<F: Fn(f64) -> Result<f64>>(
        f: &F,
        (a, fa): (f64, f64),
        (m, fm): (f64, f64),
        (b, fb): (f64, f64),
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm)?, f(rm)?);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return Ok(left + right + diff / 15.0);
        }
        Ok(rec(f, (a, fa), (lm, flm), (m, fm), left, 0.5 * tol, depth - 1)?
            + rec(f, (m, fm), (rm, frm), (b, fb), right, 0.5 * tol, depth - 1)?)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, (a, fa), (m, fm), (b, fb), whole, tol, depth)
}

/// Mean of `V` over the unit sphere.
pub fn boundary_mean(v: &PshOracle, quad: &SphereQuadrature) -> Result<f64> {
    sphere_mean(v, &CPoint::origin(v.dim()), 1.0, quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::FnPotential;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn c1(x: f64) -> CPoint {
        CPoint::c1_parts(x, 0.0)
    }

    fn spec1(poles: &[(f64, f64)]) -> GreenPotentialSpec {
        GreenPotentialSpec::new(1, poles.iter().map(|&(x, w)| Atom { location: c1(x), weight: w }).collect()).unwrap()
    }

    #[test]
    fn green_examples() {
        let z = CPoint::c1_parts(0.3, -0.4);
        assert_abs_diff_eq!(green_value(&c1(0.0), &z).unwrap().finite().unwrap(), 0.5f64.ln(), epsilon = 1e-15);
        assert!(green_value(&z, &z).unwrap().is_neg_inf());
        let edge = CPoint::c1_parts(0.6, 0.8);
        assert_abs_diff_eq!(green_value(&z, &edge).unwrap().finite().unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn kernel_examples() {
        assert_abs_diff_eq!(poisson_szego(&c1(0.0), &c1(1.0)).unwrap(), 1.0);
        assert_abs_diff_eq!(poisson_szego(&c1(0.5), &c1(1.0)).unwrap(), 3.0, epsilon = 1e-14);
        let z = CPoint::new(vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        let zeta = CPoint::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(poisson_szego(&z, &zeta).unwrap(), 9.0, epsilon = 1e-13);
        assert!(poisson_szego(&c1(0.5), &c1(0.9)).is_err());
    }

    #[test]
    fn kappa_examples() {
        assert_abs_diff_eq!(kappa_constant(0.5, 2).unwrap(), 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(kappa_constant(1e-12, 1).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(kappa_constant(1.0 / 3.0, 3).unwrap(), 8.0, epsilon = 1e-13);
        assert!(kappa_constant(1.0, 2).is_err());
    }

    #[test]
    fn green_potential_examples() {
        let s = spec1(&[(0.0, 1.0)]);
        let z = CPoint::c1_parts(0.2, 0.1);
        assert_abs_diff_eq!(green_potential(&s, &z).unwrap().finite().unwrap(), z.norm().ln(), epsilon = 1e-15);
        let s = spec1(&[(0.5, 0.5), (-0.5, 0.5)]);
        assert_abs_diff_eq!(green_potential(&s, &c1(0.0)).unwrap().finite().unwrap(), 0.5f64.ln(), epsilon = 1e-15);
        let near = CPoint::c1_parts(0.0, 1.0 - 1e-6);
        assert!(green_potential(&s, &near).unwrap().finite().unwrap() >= -1e-4);
        assert!(GreenPotentialSpec::new(1, vec![Atom { location: c1(1.0), weight: 1.0 }]).is_err());
    }

    #[test]
    fn exact_invariant_theta_examples() {
        let o = green_oracle(&spec1(&[(0.0, 1.0)])).unwrap();
        let q = o.quadrature().clone();
        assert_eq!(invariant_theta(&o, &c1(0.0), 0.3, &q).unwrap(), 1.0);
        let o = green_oracle(&spec1(&[(0.5, 1.0)])).unwrap();
        assert_eq!(invariant_theta(&o, &c1(0.0), 0.4, &q).unwrap(), 0.0);
        assert_eq!(invariant_theta(&o, &c1(0.0), 0.6, &q).unwrap(), 1.0);
    }

    #[test]
    fn numeric_invariant_theta_matches_exact_in_one_variable() {
        let exact = green_oracle(&spec1(&[(0.5, 1.0)])).unwrap();
        let f = FnPotential::new(1, "G_0.5", |z| green_value(&c1(0.5), z).unwrap()).oracle().unwrap();
        let q = f.quadrature().clone();
        for &(x, t) in &[(0.0, 0.3), (0.0, 0.7), (0.2, 0.5), (-0.4, 0.9)] {
            let e = invariant_theta(&exact, &c1(x), t, &q).unwrap();
            let n = invariant_theta(&f, &c1(x), t, &q).unwrap();
            assert_abs_diff_eq!(e, n, epsilon = 1e-8);
        }
    }

    #[test]
    fn jensen_poisson_szego_examples() {
        let re = FnPotential::new(1, "Re z", |z| LogValue::Finite(z.z().re)).oracle().unwrap();
        let q = re.quadrature().clone();
        assert!(jensen_ps_residual(&re, &c1(0.3), &q).unwrap() <= 1e-8);
        let sq = FnPotential::new(1, "|z|^2", |z| LogValue::Finite(z.norm_sqr())).oracle().unwrap();
        assert!(jensen_ps_residual(&sq, &c1(0.0), &q).unwrap() <= 1e-6);
        let lg = FnPotential::new(1, "log(|z|^2+1)", |z| LogValue::Finite((z.norm_sqr() + 1.0).ln())).oracle().unwrap();
        assert!(jensen_ps_residual(&lg, &c1(0.0), &q).unwrap() <= 1e-4);
        assert!(jensen_ps_residual(&lg, &CPoint::c1_parts(0.3, 0.4), &q).unwrap() <= 1e-4);
    }
}

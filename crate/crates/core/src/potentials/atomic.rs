//! Discrete logarithmic potentials, polynomial log-moduli and closure-defined functions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Provenance, Psh, PshOracle};
use crate::ball::invariant_distance;
use crate::error::{domain, Error, Result};
use crate::point::{CPoint, LogValue};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: CPoint,
    pub weight: f64,
}

/// Finitely many weighted point masses in C^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct AtomicMeasure {
    pub dimension: usize,
    pub atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawMeasure {
    dimension: usize,
    atoms: Vec<Atom>,
}

impl TryFrom<RawMeasure> for AtomicMeasure {
    type Error = Error;
    fn try_from(r: RawMeasure) -> Result<Self> {
        AtomicMeasure::new(r.dimension, r.atoms)
    }
}

impl AtomicMeasure {
    pub fn new(dimension: usize, atoms: Vec<Atom>) -> Result<Self> {
        if dimension == 0 {
            return Err(domain!("dimension must be at least 1"));
        }
        for a in &atoms {
            a.location.check_dim(dimension)?;
            if !(a.weight > 0.0) || !a.weight.is_finite() {
                return Err(domain!("atom weights must be positive and finite, got {}", a.weight));
            }
        }
        Ok(AtomicMeasure { dimension, atoms })
    }

    /// Atoms in C^1 from `(location, weight)` pairs.
    pub fn planar(atoms: &[(Complex64, f64)]) -> Result<Self> {
        Self::new(
            1,
            atoms
                .iter()
                .map(|&(z, w)| Atom { location: CPoint::c1(z), weight: w })
                .collect(),
        )
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Mass of the closed ball `B(z, t)`.
    pub fn ball_mass(&self, z: &CPoint, t: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.location.dist(z) <= t)
            .map(|a| a.weight)
            .sum()
    }
}

/// `V(z) = c + sum_k w_k log|z - a_k|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretePotential {
    pub measure: AtomicMeasure,
    pub constant: f64,
}

impl Psh for DiscretePotential {
    fn dim(&self) -> usize {
        self.measure.dimension
    }

    fn eval(&self, z: &CPoint) -> LogValue {
        let mut acc = LogValue::Finite(self.constant);
        for a in &self.measure.atoms {
            acc = acc.plus(LogValue::ln(a.location.dist(z)).scale(a.weight));
        }
        acc
    }

    fn provenance(&self) -> Provenance {
        if self.dim() == 1 {
            Provenance::ExactAtomic1d
        } else {
            Provenance::NumericSphereMean
        }
    }

    fn exact_theta(&self, z: &CPoint, t: f64) -> Option<f64> {
        (self.dim() == 1).then(|| self.measure.ball_mass(z, t))
    }

    fn theta_breakpoints(&self, z: &CPoint) -> Vec<f64> {
        if self.dim() != 1 {
            return Vec::new();
        }
        self.measure.atoms.iter().map(|a| a.location.dist(z)).collect()
    }

    fn exact_invariant_theta(&self, z: &CPoint, t: f64) -> Option<f64> {
        if self.dim() != 1 || z.norm() >= 1.0 {
            return None;
        }
        let mut acc = 0.0;
        for a in self.measure.atoms.iter().filter(|a| a.location.norm() < 1.0) {
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
        self.measure
            .atoms
            .iter()
            .filter(|a| a.location.norm() < 1.0)
            .filter_map(|a| invariant_distance(z, &a.location).ok())
            .collect()
    }

    fn total_mass(&self) -> Option<f64> {
        Some(self.measure.total_mass())
    }

    fn affine_pullback(&self, r: f64, factor: f64, offset: f64) -> Option<Arc<dyn Psh>> {
        let atoms = self
            .measure
            .atoms
            .iter()
            .map(|a| Atom { location: a.location.scale_real(1.0 / r), weight: factor * a.weight })
            .collect();
        let measure = AtomicMeasure::new(self.measure.dimension, atoms).ok()?;
        let constant = factor * (self.constant + self.measure.total_mass() * r.ln()) + offset;
        Some(Arc::new(DiscretePotential { measure, constant }))
    }
}

/// `V = sum_k w_k log|z - a_k|`; exact oracles in C^1, quadrature otherwise.
pub fn discrete_potential(mu: &AtomicMeasure) -> Result<PshOracle> {
    if mu.is_empty() {
        return Err(Error::Empty("atom list"));
    }
    PshOracle::new(DiscretePotential { measure: mu.clone(), constant: 0.0 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub root: Complex64,
    pub multiplicity: u32,
}

/// A one-variable polynomial `lead * prod (z - root)^multiplicity`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactoredPoly {
    pub factors: Vec<Factor>,
    #[serde(default = "one")]
    pub lead: Complex64,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl FactoredPoly {
    pub fn monic(roots: &[Complex64]) -> Self {
        FactoredPoly {
            factors: roots.iter().map(|&r| Factor { root: r, multiplicity: 1 }).collect(),
            lead: one(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.multiplicity).sum()
    }

    /// Roots repeated according to multiplicity.
    pub fn roots(&self) -> Vec<Complex64> {
        self.factors
            .iter()
            .flat_map(|f| std::iter::repeat(f.root).take(f.multiplicity as usize))
            .collect()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.factors
            .iter()
            .fold(self.lead, |acc, f| acc * (z - f.root).powu(f.multiplicity))
    }

    /// `log|P(z)|` computed factor by factor.
    pub fn log_abs(&self, z: Complex64) -> LogValue {
        let mut acc = LogValue::ln(self.lead.norm());
        for f in &self.factors {
            acc = acc.plus(LogValue::ln((z - f.root).norm()).scale(f.multiplicity as f64));
        }
        acc
    }
}

/// A polynomial on C^n as a list of monomials `coeff * z^exponents`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiPoly {
    pub dimension: usize,
    pub terms: Vec<(Complex64, Vec<u32>)>,
}

impl MultiPoly {
    pub fn eval(&self, z: &CPoint) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                e.iter()
                    .zip(z.coords())
                    .fold(*c, |acc, (&k, &zi)| acc * zi.powu(k))
            })
            .sum()
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|(c, _)| c.norm() > 0.0)
            .map(|(_, e)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polynomial {
    Factored(FactoredPoly),
    Terms(MultiPoly),
}

/// `log|P| / scale` for a multivariate polynomial; quadrature oracles only.
#[derive(Clone, Debug)]
pub struct PolyPotential {
    pub poly: MultiPoly,
    pub scale: f64,
}

impl Psh for PolyPotential {
    fn dim(&self) -> usize {
        self.poly.dimension
    }

    fn eval(&self, z: &CPoint) -> LogValue {
        LogValue::ln(self.poly.eval(z).norm()).scale(1.0 / self.scale)
    }
}

/// `V = (1/d) log|P|` when `normalize`, else `log|P|`.
///
/// Factored one-variable input becomes the discrete potential of the roots (weights
/// `multiplicity / d`) plus the constant `log|lead| / d`, so its oracles are exact.
pub fn log_poly_potential(poly: &Polynomial, normalize: bool) -> Result<PshOracle> {
    match poly {
        Polynomial::Factored(p) => {
            if p.lead.norm() == 0.0 || !p.lead.norm().is_finite() {
                return Err(domain!("the zero polynomial has no log-modulus"));
            }
            let d = p.degree();
            if normalize && d == 0 {
                return Err(domain!("cannot normalise a constant polynomial by its degree"));
            }
            let scale = if normalize { d as f64 } else { 1.0 };
            let atoms = p
                .factors
                .iter()
                .filter(|f| f.multiplicity > 0)
                .map(|f| super::Atom { location: CPoint::c1(f.root), weight: f.multiplicity as f64 / scale })
                .collect();
            let measure = AtomicMeasure::new(1, atoms)?;
            PshOracle::new(DiscretePotential { measure, constant: p.lead.norm().ln() / scale })
        }
        Polynomial::Terms(p) => {
            if p.terms.iter().all(|(c, _)| c.norm() == 0.0) {
                return Err(domain!("the zero polynomial has no log-modulus"));
            }
            for (_, e) in &p.terms {
                if e.len() != p.dimension {
                    return Err(Error::DimensionMismatch { expected: p.dimension, got: e.len() });
                }
            }
            let d = p.degree();
            if normalize && d == 0 {
                return Err(domain!("cannot normalise a constant polynomial by its degree"));
            }
            let scale = if normalize { d as f64 } else { 1.0 };
            PshOracle::new(PolyPotential { poly: p.clone(), scale })
        }
    }
}

type EvalFn = dyn Fn(&CPoint) -> LogValue + Send + Sync;

/// A psh function given by a closure; all masses come from quadrature.
#[derive(Clone)]
pub struct FnPotential {
    dim: usize,
    label: String,
    f: Arc<EvalFn>,
}

impl FnPotential {
    pub fn new<F>(dim: usize, label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&CPoint) -> LogValue + Send + Sync + 'static,
    {
        FnPotential { dim, label: label.into(), f: Arc::new(f) }
    }

    pub fn oracle(self) -> Result<PshOracle> {
        PshOracle::new(self)
    }
}

impl fmt::Debug for FnPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnPotential({}, n = {})", self.label, self.dim)
    }
}

impl Psh for FnPotential {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, z: &CPoint) -> LogValue {
        (self.f)(z)
    }
}

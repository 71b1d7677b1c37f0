//! Points of C^n and the explicit `-inf` sentinel used by every potential.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A point of C^n stored as `n` complex coordinates, all finite.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoint(Vec<Complex64>);

impl CPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Empty("point coordinates"));
        }
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(domain!("point coordinates must be finite"));
        }
        Ok(CPoint(coords))
    }

    /// Unchecked constructor for internal arithmetic on already finite data.
    pub(crate) fn from_vec(coords: Vec<Complex64>) -> Self {
        debug_assert!(!coords.is_empty());
        CPoint(coords)
    }

    /// A point of C^1.
    pub fn c1(z: Complex64) -> Self {
        CPoint(vec![z])
    }

    /// A point of C^1 from real and imaginary parts.
    pub fn c1_parts(re: f64, im: f64) -> Self {
        CPoint(vec![Complex64::new(re, im)])
    }

    pub fn origin(n: usize) -> Self {
        CPoint(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    /// First coordinate; the natural view of a point of C^1.
    pub fn z(&self) -> Complex64 {
        self.0[0]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian product `<self, other> = sum self_i * conj(other_i)`.
    pub fn inner(&self, other: &CPoint) -> Complex64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn dist(&self, other: &CPoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: Complex64) -> CPoint {
        CPoint(self.0.iter().map(|c| c * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> CPoint {
        CPoint(self.0.iter().map(|c| c * s).collect())
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.dim(),
            });
        }
        Ok(())
    }

    /// Real coordinates `(re_0, im_0, re_1, im_1, ...)` of the point in R^{2n}.
    pub fn to_real(&self) -> Vec<f64> {
        self.0.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn from_real(xs: &[f64]) -> Result<Self> {
        if xs.len() % 2 != 0 || xs.is_empty() {
            return Err(domain!("real coordinate list must have positive even length"));
        }
        CPoint::new(
            xs.chunks(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        )
    }
}

impl Add<&CPoint> for &CPoint {
    type Output = CPoint;
    fn add(self, rhs: &CPoint) -> CPoint {
        CPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&CPoint> for &CPoint {
    type Output = CPoint;
    fn sub(self, rhs: &CPoint) -> CPoint {
        CPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &CPoint {
    type Output = CPoint;
    fn mul(self, rhs: f64) -> CPoint {
        self.scale_real(rhs)
    }
}

impl fmt::Display for CPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", c.re, c.im)?;
        }
        write!(f, ")")
    }
}

// Serialized as `[[re, im], ...]`, one pair per coordinate.
impl Serialize for CPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        CPoint::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .map_err(de::Error::custom)
    }
}

/// Value of a plurisubharmonic function: finite, or the `-inf` sentinel.
///
/// Variant order makes `NegInfinity` compare below every finite value.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum LogValue {
    NegInfinity,
    Finite(f64),
}

impl LogValue {
    /// `ln x` for `x >= 0`, with `ln 0` mapped to the sentinel.
    pub fn ln(x: f64) -> Self {
        if x > 0.0 {
            LogValue::Finite(x.ln())
        } else {
            LogValue::NegInfinity
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            LogValue::Finite(v) => Some(v),
            LogValue::NegInfinity => None,
        }
    }

    pub fn is_neg_inf(self) -> bool {
        matches!(self, LogValue::NegInfinity)
    }

    /// Adds a finite constant.
    pub fn shift(self, c: f64) -> Self {
        match self {
            LogValue::Finite(v) => LogValue::Finite(v + c),
            s => s,
        }
    }

    /// Multiplies by a positive weight.
    pub fn scale(self, w: f64) -> Self {
        debug_assert!(w > 0.0);
        match self {
            LogValue::Finite(v) => LogValue::Finite(v * w),
            s => s,
        }
    }

    pub fn plus(self, other: LogValue) -> Self {
        match (self, other) {
            (LogValue::Finite(a), LogValue::Finite(b)) => LogValue::Finite(a + b),
            _ => LogValue::NegInfinity,
        }
    }

    pub fn max(self, other: LogValue) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// True when `self >= bound - tol`; the sentinel satisfies no finite bound.
    pub fn at_least(self, bound: f64, tol: f64) -> bool {
        match self {
            LogValue::Finite(v) => v >= bound - tol,
            LogValue::NegInfinity => false,
        }
    }
}

impl Serialize for LogValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LogValue::Finite(v) => s.serialize_f64(*v),
            LogValue::NegInfinity => s.serialize_str("-inf"),
        }
    }
}

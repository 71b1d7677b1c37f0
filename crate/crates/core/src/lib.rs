//! Numerical verification of minimum-modulus principles for plurisubharmonic functions.
//!
//! The crate is organised around one generic engine, the exclusion-ball method
//! ([`exclusion::exclusion_cover`]): sample points whose projective mass grows too fast on
//! small balls are declared exceptional and covered by a Vitali-expanded disjoint family,
//! whose power-sum content is then compared with the bound of the relevant theorem.
//!
//! * [`cover`] and [`exclusion`] hold the ball geometry and the engine.
//! * [`potentials`] builds concrete psh functions with exact (atomic, `n = 1`) or
//!   quadrature-based projective-mass oracles.
//! * [`ball`] holds the invariant geometry of the unit ball and its harnesses.
//! * [`principles`] holds the one-variable and three-circle harnesses.

pub mod ball;
pub mod cover;
pub mod error;
pub mod exclusion;
pub mod point;
pub mod potentials;
pub mod principles;
pub mod report;
pub mod sampling;

pub use cover::{BallCover, Metric, MetricBall};
pub use error::{Error, Result};
pub use exclusion::{ExclusionParams, ExclusionReport};
pub use point::{CPoint, LogValue};
pub use potentials::{PshOracle, SphereQuadrature};
pub use report::{HarnessReport, Verdict};

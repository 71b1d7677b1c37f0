//! Input documents read by the subcommands.

use lemlab_core::ball::{green_oracle, GreenPotentialSpec};
use lemlab_core::potentials::{log_poly_potential, AtomicMeasure, DiscretePotential, FactoredPoly, Polynomial};
use lemlab_core::principles::PlaneSet;
use lemlab_core::{CPoint, PshOracle};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// A plurisubharmonic function described by data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PotentialSpec {
    /// `sum w_k log|z - a_k| + constant`.
    Measure {
        measure: AtomicMeasure,
        #[serde(default)]
        constant: f64,
    },
    /// `log|P|`, divided by the degree when `normalize` holds.
    Polynomial {
        polynomial: Polynomial,
        #[serde(default = "yes")]
        normalize: bool,
    },
    /// A Green potential of the unit ball.
    Green { spec: GreenPotentialSpec },
}

fn yes() -> bool {
    true
}

impl PotentialSpec {
    pub fn oracle(&self) -> CliResult<PshOracle> {
        Ok(match self {
            PotentialSpec::Measure { measure, constant } => {
                PshOracle::new(DiscretePotential { measure: measure.clone(), constant: *constant })?
            }
            PotentialSpec::Polynomial { polynomial, normalize } => log_poly_potential(polynomial, *normalize)?,
            PotentialSpec::Green { spec } => green_oracle(spec)?,
        })
    }

    /// Atom locations, when the function is a discrete potential.
    pub fn atoms(&self) -> Vec<CPoint> {
        match self {
            PotentialSpec::Measure { measure, .. } => measure.atoms.iter().map(|a| a.location.clone()).collect(),
            PotentialSpec::Polynomial { polynomial: Polynomial::Factored(p), .. } => {
                p.roots().into_iter().map(CPoint::c1).collect()
            }
            PotentialSpec::Polynomial { .. } => Vec::new(),
            PotentialSpec::Green { spec } => spec.atoms.iter().map(|a| a.location.clone()).collect(),
        }
    }
}

fn parse<T: DeserializeOwned>(doc: Option<&serde_json::Value>, what: &str) -> CliResult<T> {
    let doc = doc.ok_or_else(|| CliError::Input(format!("expected {what}, got no input")))?;
    serde_json::from_value(doc.clone()).map_err(|e| CliError::Input(format!("expected {what}: {e}")))
}

pub fn potential(doc: Option<&serde_json::Value>) -> CliResult<PotentialSpec> {
    parse(doc, "a potential spec")
}

pub fn factored_poly(doc: Option<&serde_json::Value>) -> CliResult<FactoredPoly> {
    parse(doc, "a factored one-variable polynomial")
}

pub fn plane_set(doc: Option<&serde_json::Value>) -> CliResult<PlaneSet> {
    parse(doc, "a plane set")
}

/// Accepts either a bare Green spec or a potential spec of kind `green`.
pub fn green_spec(doc: Option<&serde_json::Value>) -> CliResult<GreenPotentialSpec> {
    if let Ok(PotentialSpec::Green { spec }) = parse::<PotentialSpec>(doc, "") {
        return Ok(spec);
    }
    parse(doc, "a Green potential spec")
}

//! Run configuration and the persisted run report.

use std::path::PathBuf;

use lemlab_core::HarnessReport;
use serde::{Deserialize, Serialize};

/// Version of the [`RunReport`] layout. Replay refuses any other value.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Cartan,
    Minmod,
    Thm42,
    Cor43,
    Capacity,
    Cor44,
    Constants,
    ThreeCircleMax,
    LelongBound,
    ThreeCircleMin,
    Cor64,
    Essential,
    Lemma51,
    Prop52,
    Thm53,
}

impl Command {
    pub const ALL: [Command; 15] = [
        Command::Cartan,
        Command::Minmod,
        Command::Thm42,
        Command::Cor43,
        Command::Capacity,
        Command::Cor44,
        Command::Constants,
        Command::ThreeCircleMax,
        Command::LelongBound,
        Command::ThreeCircleMin,
        Command::Cor64,
        Command::Essential,
        Command::Lemma51,
        Command::Prop52,
        Command::Thm53,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Cartan => "cartan",
            Command::Minmod => "minmod",
            Command::Thm42 => "thm42",
            Command::Cor43 => "cor43",
            Command::Capacity => "capacity",
            Command::Cor44 => "cor44",
            Command::Constants => "constants",
            Command::ThreeCircleMax => "three-circle-max",
            Command::LelongBound => "lelong-bound",
            Command::ThreeCircleMin => "three-circle-min",
            Command::Cor64 => "cor64",
            Command::Essential => "essential",
            Command::Lemma51 => "lemma51",
            Command::Prop52 => "prop52",
            Command::Thm53 => "thm53",
        }
    }

    /// Whether the command reads an input document.
    pub fn needs_input(self) -> bool {
        self != Command::Constants
    }
}

/// Mathematical parameters; each command reads the ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MathParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Content exponent for the essential lower bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Overrides the empirical constant of the unit-ball mass comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_n: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    /// Where the input document was read from; informational only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// The parsed input document, embedded so that a replay does not depend on the file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_doc: Option<serde_json::Value>,
    pub params: MathParams,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, seed: u64) -> Self {
        RunConfig {
            command,
            input: None,
            input_doc: None,
            params: MathParams::default(),
            seed,
            grid: None,
            samples: None,
            quad_nodes: None,
            out: None,
        }
    }

    pub fn with_input_doc(mut self, doc: serde_json::Value) -> Self {
        self.input_doc = Some(doc);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub payload: HarnessReport,
    pub wall_clock_secs: f64,
    #[serde(default)]
    pub artifacts: Vec<String>,
}

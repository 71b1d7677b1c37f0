//! The JSON-facing summary every harness returns.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exclusion::ExclusionReport;
use crate::potentials::Provenance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// A one-sided check that could not decide.
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// `Fail` dominates, then `Inconclusive`.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
            _ => Verdict::Pass,
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    pub harness: String,
    pub params: BTreeMap<String, f64>,
    /// Constants derived or emitted by the harness (kappa, c_n estimate, C, ...).
    pub constants: BTreeMap<String, f64>,
    pub counts: BTreeMap<String, u64>,
    pub content_sum: f64,
    pub paper_bound: f64,
    pub verdict: Verdict,
    pub provenance: Vec<Provenance>,
    /// Convergence sequences and other per-item values, for inspection.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclusion: Option<ExclusionReport>,
    pub seed: Option<u64>,
}

impl HarnessReport {
    pub fn new(harness: impl Into<String>) -> Self {
        HarnessReport {
            harness: harness.into(),
            params: BTreeMap::new(),
            constants: BTreeMap::new(),
            counts: BTreeMap::new(),
            content_sum: 0.0,
            paper_bound: 0.0,
            verdict: Verdict::Pass,
            provenance: Vec::new(),
            series: BTreeMap::new(),
            notes: Vec::new(),
            exclusion: None,
            seed: None,
        }
    }

    pub fn param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// Records a constant. JSON has no infinities, so a non-finite value becomes a note.
    pub fn constant(&mut self, key: &str, value: f64) {
        if value.is_finite() {
            self.constants.insert(key.to_string(), value);
        } else {
            self.notes.push(format!("{key} = {value}"));
        }
    }

    pub fn count(&mut self, key: &str, value: usize) {
        self.counts.insert(key.to_string(), value as u64);
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn add_provenance(&mut self, p: Provenance) {
        if !self.provenance.contains(&p) {
            self.provenance.push(p);
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_combination() {
        assert_eq!(Verdict::Pass.and(Verdict::Pass), Verdict::Pass);
        assert_eq!(Verdict::Pass.and(Verdict::Inconclusive), Verdict::Inconclusive);
        assert_eq!(Verdict::Inconclusive.and(Verdict::Fail), Verdict::Fail);
    }

    #[test]
    fn report_round_trips() {
        let mut r = HarnessReport::new("demo").param("eta", 0.5);
        r.constant("C", 3.0);
        r.count("good", 10);
        r.add_provenance(Provenance::ExactAtomic1d);
        r.add_provenance(Provenance::ExactAtomic1d);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"verdict\":\"pass\""));
        assert!(s.contains("EXACT_ATOMIC_1D"));
        let back: HarnessReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.provenance.len(), 1);
    }
}

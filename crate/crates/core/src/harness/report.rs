use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A hypothesis of the claim does not hold for this run.
    Inapplicable,
    Diverged,
}

impl Verdict {
    /// Pass and inapplicable do not count against a run.
    pub fn is_acceptable(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Inapplicable)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub claim_id: String,
    pub parameters: BTreeMap<String, Value>,
    pub measured: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl TheoremReport {
    pub fn new(claim_id: &str) -> Self {
        Self {
            claim_id: claim_id.to_string(),
            parameters: BTreeMap::new(),
            measured: 0.0,
            tolerance: 0.0,
            verdict: Verdict::Inapplicable,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn inapplicable(self, why: impl Into<String>) -> Self {
        let mut r = self.note(why);
        r.verdict = Verdict::Inapplicable;
        r
    }

    /// Pass iff `measured <= tolerance`.
    pub fn judge(mut self, measured: f64, tolerance: f64) -> Self {
        self.measured = measured;
        self.tolerance = tolerance;
        self.verdict = if measured <= tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self
    }

    pub fn with_verdict(mut self, measured: f64, tolerance: f64, verdict: Verdict) -> Self {
        self.measured = measured;
        self.tolerance = tolerance;
        self.verdict = verdict;
        self
    }
}

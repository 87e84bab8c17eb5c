//! A uniform machine- and human-readable result record for checks.
//!
//! Every command produces a [`CheckReport`]: the name of the check, the
//! inputs it ran on, a three-valued verdict, an optional witness describing
//! the decisive counterexample or certificate, and how much work was done.
//! Serialisation is deterministic — inputs live in an ordered map and the
//! only varying field is the elapsed time.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Three-valued outcome of a check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// The outcome of one check run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub inputs: BTreeMap<String, String>,
    pub verdict: Verdict,
    /// Human-readable certificate or counterexample, when one exists.
    pub witness: Option<String>,
    /// How many candidates, nodes or families the decision examined.
    pub candidates_examined: u64,
    pub elapsed_micros: u64,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            inputs: BTreeMap::new(),
            verdict: Verdict::Inconclusive,
            witness: None,
            candidates_examined: 0,
            elapsed_micros: 0,
        }
    }

    pub fn input(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.inputs.insert(key.into(), value.to_string());
        self
    }

    pub fn verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn pass_if(self, passed: bool) -> Self {
        self.verdict(if passed { Verdict::Pass } else { Verdict::Fail })
    }

    pub fn witness(mut self, witness: impl Into<String>) -> Self {
        self.witness = Some(witness.into());
        self
    }

    pub fn candidates(mut self, n: u64) -> Self {
        self.candidates_examined = n;
        self
    }

    pub fn elapsed(mut self, elapsed: Duration) -> Self {
        self.elapsed_micros = elapsed.as_micros().min(u64::MAX as u128) as u64;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    /// Equality of everything except the timing field.
    pub fn same_outcome(&self, other: &CheckReport) -> bool {
        self.check == other.check
            && self.inputs == other.inputs
            && self.verdict == other.verdict
            && self.witness == other.witness
            && self.candidates_examined == other.candidates_examined
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check: {}", self.check)?;
        for (k, v) in &self.inputs {
            writeln!(f, "  {k}: {v}")?;
        }
        writeln!(f, "verdict: {}", self.verdict)?;
        if let Some(w) = &self.witness {
            writeln!(f, "witness: {w}")?;
        }
        writeln!(f, "candidates examined: {}", self.candidates_examined)?;
        write!(f, "elapsed: {}us", self.elapsed_micros)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_serialise_deterministically_modulo_elapsed() {
        let build = |elapsed| {
            CheckReport::new("broadcast")
                .input("groupoid", "S3")
                .input("limit", 16)
                .pass_if(false)
                .witness("a non-endomorphism exists")
                .candidates(42)
                .elapsed(Duration::from_micros(elapsed))
        };
        let a = build(10);
        let b = build(99);
        assert!(a.same_outcome(&b));
        assert_ne!(a.to_json(), b.to_json());
        let a_wiped = build(0);
        let b_wiped = build(0);
        assert_eq!(a_wiped.to_json(), b_wiped.to_json());
        let parsed: CheckReport = serde_json::from_str(&a.to_json()).unwrap();
        assert!(parsed.same_outcome(&a));
        assert_eq!(parsed.verdict, Verdict::Fail);
    }

    #[test]
    fn display_is_single_record_per_line() {
        let r = CheckReport::new("ki")
            .input("triple", "Z6-disjoint-subgroups")
            .verdict(Verdict::Pass)
            .candidates(3);
        let text = r.to_string();
        assert!(text.contains("check: ki"));
        assert!(text.contains("verdict: pass"));
        assert!(text.contains("candidates examined: 3"));
    }
}

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::field::QuadExt;

/// Outcome of one exact check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub detail: String,
    /// A point where the failing identity was observed to differ.
    pub witness: Option<Vec<QuadExt>>,
    /// Largest intermediate expression size, in terms.
    pub terms: usize,
}

impl Verdict {
    pub fn pass(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict { check: check.into(), pass: true, detail: detail.into(), witness: None, terms: 0 }
    }

    pub fn fail(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict { check: check.into(), pass: false, detail: detail.into(), witness: None, terms: 0 }
    }

    pub fn from_bool(check: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Verdict { check: check.into(), pass: ok, detail: detail.into(), witness: None, terms: 0 }
    }

    pub fn with_witness(mut self, w: Option<Vec<QuadExt>>) -> Self {
        self.witness = w;
        self
    }

    pub fn with_terms(mut self, terms: usize) -> Self {
        self.terms = terms;
        self
    }
}

/// All verdicts for one construction.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Certificate {
    pub id: String,
    pub anchors: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
    /// Wall time, filled in by the runner.
    pub ms: Option<u64>,
    /// Set when the construction could not run for lack of an input.
    pub skipped: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

impl Certificate {
    pub fn new(id: &str, anchors: &[&str]) -> Self {
        Certificate { id: id.to_string(), anchors: anchors.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn skipped(id: &str, anchors: &[&str], reason: &str) -> Self {
        Certificate { skipped: Some(reason.to_string()), ..Self::new(id, anchors) }
    }

    pub fn push(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn extend(&mut self, vs: impl IntoIterator<Item = Verdict>) {
        self.verdicts.extend(vs);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Passes iff it has verdicts and all of them pass.
    pub fn passed(&self) -> bool {
        self.skipped.is_none() && !self.verdicts.is_empty() && self.verdicts.iter().all(|v| v.pass)
    }

    /// A skipped certificate is neither a pass nor a failure.
    pub fn status(&self) -> Status {
        if self.skipped.is_some() {
            Status::Skipped
        } else if self.passed() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    pub fn max_terms(&self) -> usize {
        self.verdicts.iter().map(|v| v.terms).max().unwrap_or(0)
    }
}

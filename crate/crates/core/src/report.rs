//! Check records shared by every verifier.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    WindowLimited,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::WindowLimited => "window-limited",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl Check {
    pub fn pass(id: impl Into<String>) -> Self {
        Check { id: id.into(), status: Status::Pass, witnesses: Vec::new() }
    }

    pub fn fail(id: impl Into<String>, witness: impl Into<String>) -> Self {
        Check { id: id.into(), status: Status::Fail, witnesses: vec![witness.into()] }
    }

    pub fn with_status(id: impl Into<String>, status: Status, witnesses: Vec<String>) -> Self {
        Check { id: id.into(), status, witnesses }
    }

    /// Pass when `witnesses` is empty, fail otherwise.
    pub fn from_witnesses(id: impl Into<String>, witnesses: Vec<String>) -> Self {
        let status = if witnesses.is_empty() { Status::Pass } else { Status::Fail };
        Check { id: id.into(), status, witnesses }
    }

    pub fn note(mut self, witness: impl Into<String>) -> Self {
        self.witnesses.push(witness.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Worst status across checks: fail beats inconclusive beats window-limited.
pub fn overall(checks: &[Check]) -> Status {
    let has = |s| checks.iter().any(|c| c.status == s);
    if has(Status::Fail) {
        Status::Fail
    } else if has(Status::Inconclusive) {
        Status::Inconclusive
    } else if has(Status::WindowLimited) {
        Status::WindowLimited
    } else {
        Status::Pass
    }
}

/// Keeps the first few witnesses and a count of the rest.
pub fn truncate_witnesses(mut w: Vec<String>, keep: usize) -> Vec<String> {
    if w.len() > keep {
        let extra = w.len() - keep;
        w.truncate(keep);
        w.push(format!("... and {extra} more"));
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_order_and_names() {
        let c = vec![Check::pass("a"), Check::with_status("b", Status::Inconclusive, vec![])];
        assert_eq!(overall(&c), Status::Inconclusive);
        assert_eq!(Status::WindowLimited.to_string(), "window-limited");
        assert_eq!(truncate_witnesses(vec!["x".into(); 5], 2).len(), 3);
    }
}

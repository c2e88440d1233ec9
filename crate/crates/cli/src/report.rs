//! The report every subcommand produces.

use std::fmt::Write as _;

use pathcat::report::{overall, Check, Status};
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    /// Arguments after the program name, as given.
    pub command: Vec<String>,
    pub field: String,
    pub window: String,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: Vec<String>, field: String, window: String, seed: u64, checks: Vec<Check>) -> Self {
        let status = overall(&checks);
        Report { schema: SCHEMA, command, field, window, seed, status, checks }
    }

    /// 0 when everything passed (window-limited counts as passed), 1 on any
    /// failure, 3 when the worst outcome is inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass | Status::WindowLimited => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "pathcat {}", self.command.join(" "));
        let _ = writeln!(out, "field {}  window {}  seed {}", self.field, self.window, self.seed);
        let width = self.checks.iter().map(|c| c.status.to_string().len()).max().unwrap_or(4);
        for c in &self.checks {
            let _ = writeln!(out, "{:<width$}  {}", c.status.to_string().to_uppercase(), c.id);
            for w in &c.witnesses {
                let _ = writeln!(out, "{:<width$}    {w}", "");
            }
        }
        let _ = writeln!(out, "overall: {}", self.status);
        out
    }
}

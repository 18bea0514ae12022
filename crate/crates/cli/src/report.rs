//! Verification reports and their JSON document.

use std::time::Instant;

use nash_atlas_core::report::Outcome;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

/// One executed check. Field order is the JSON field order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub citation: String,
    pub status: Status,
    pub max_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub seed: u64,
    pub wall_ms: f64,
    pub failures: Vec<String>,
}

/// Failure messages kept per report; the count of the rest is appended.
const MAX_FAILURES: usize = 5;

impl VerificationReport {
    pub fn from_outcome(check: &str, citation: &str, seed: u64, outcome: Outcome, started: Instant) -> Self {
        let status = if outcome.passed() { Status::Pass } else { Status::Fail };
        let mut failures = outcome.failures;
        if failures.len() > MAX_FAILURES {
            let extra = failures.len() - MAX_FAILURES;
            failures.truncate(MAX_FAILURES);
            failures.push(format!("... and {extra} more"));
        }
        VerificationReport {
            check: check.into(),
            citation: citation.into(),
            status,
            max_error: outcome.max_error,
            tolerance: outcome.tolerance,
            samples: outcome.samples,
            seed,
            wall_ms: elapsed_ms(started),
            failures,
        }
    }

    pub fn unsupported(check: &str, citation: &str, seed: u64, reason: String) -> Self {
        VerificationReport {
            check: check.into(),
            citation: citation.into(),
            status: Status::Unsupported,
            max_error: 0.0,
            tolerance: 0.0,
            samples: 0,
            seed,
            wall_ms: 0.0,
            failures: vec![reason],
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One human-readable line.
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unsupported => "SKIP",
        };
        let mut s = format!(
            "{tag} {} max_error={:e} tol={:e} samples={} ({})",
            self.check, self.max_error, self.tolerance, self.samples, self.citation
        );
        for f in &self.failures {
            s.push_str("\n     ");
            s.push_str(f);
        }
        s
    }
}

/// Milliseconds since `t`, rounded to microseconds.
pub fn elapsed_ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

/// The document written by `--json`: checks sorted by name, plus
/// command-specific details.
#[derive(Clone, Debug, Serialize)]
pub struct Document {
    pub command: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl Document {
    pub fn new(command: &str, seed: u64, mut checks: Vec<VerificationReport>, details: serde_json::Value) -> Self {
        checks.sort_by(|a, b| a.check.cmp(&b.check));
        // An unsupported check is not a failure.
        let passed = checks.iter().all(|c| c.status != Status::Fail);
        Document { command: command.into(), seed, passed, checks, details }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}

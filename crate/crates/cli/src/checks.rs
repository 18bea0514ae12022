//! Individual verification checks and the runner that turns them into
//! reports.

pub mod catalog;
pub mod doubles;
pub mod drill;
pub mod kernel;
pub mod simplex;
pub mod weld;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use nash_atlas_core::report::Outcome;

use crate::report::VerificationReport;

#[derive(Clone, Debug, PartialEq)]
pub enum CheckError {
    /// The check does not apply to this input.
    Unsupported(String),
    /// The check could not run to completion.
    Failed(String),
}

pub type CheckResult = Result<Outcome, CheckError>;

pub fn failed(e: impl std::fmt::Display) -> CheckError {
    CheckError::Failed(e.to_string())
}

type Runner = Box<dyn Fn(u64, f64) -> CheckResult + Send + Sync>;

/// A named check with its default tolerance. The runner receives the seed
/// and the tolerance in force.
pub struct Job {
    pub name: String,
    pub citation: &'static str,
    pub tolerance: f64,
    run: Runner,
}

impl Job {
    pub fn new(
        name: impl Into<String>,
        citation: &'static str,
        tolerance: f64,
        run: impl Fn(u64, f64) -> CheckResult + Send + Sync + 'static,
    ) -> Self {
        Job { name: name.into(), citation, tolerance, run: Box::new(run) }
    }

    pub fn execute(&self, seed: u64, tol: Option<f64>) -> VerificationReport {
        let started = Instant::now();
        let tol = tol.unwrap_or(self.tolerance);
        match (self.run)(seed, tol) {
            Ok(outcome) => VerificationReport::from_outcome(&self.name, self.citation, seed, outcome, started),
            Err(CheckError::Unsupported(why)) => VerificationReport::unsupported(&self.name, self.citation, seed, why),
            Err(CheckError::Failed(why)) => {
                let mut o = Outcome::new(tol);
                o.fail(why);
                VerificationReport::from_outcome(&self.name, self.citation, seed, o, started)
            }
        }
    }
}

/// Runs the jobs on all available cores and returns reports sorted by
/// check name.
pub fn run_jobs(jobs: &[Job], seed: u64, tol: Option<f64>) -> Vec<VerificationReport> {
    let next = AtomicUsize::new(0);
    let reports = Mutex::new(Vec::with_capacity(jobs.len()));
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let r = job.execute(seed, tol);
                reports.lock().expect("no worker panics while holding the lock").push(r);
            });
        }
    });
    let mut reports = reports.into_inner().expect("workers joined");
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    reports
}

/// Records one exact sample: zero error when `ok`, otherwise a failure
/// described by `msg`.
pub(crate) fn expect(out: &mut Outcome, ok: bool, msg: impl FnOnce() -> String) {
    if ok {
        out.record(0.0);
    } else {
        out.samples += 1;
        out.fail(msg());
    }
}

/// Folds a sub-check into `out`, keeping the larger error.
pub(crate) fn merge(out: &mut Outcome, sub: Outcome) {
    out.max_error = out.max_error.max(sub.max_error);
    out.absorb(sub);
}

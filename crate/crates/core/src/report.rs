//! Outcome of a sampled or exact check.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub max_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn new(tolerance: f64) -> Self {
        Outcome { max_error: 0.0, tolerance, samples: 0, failures: Vec::new() }
    }

    /// Records one sample's error. NaN counts as an unbounded error.
    pub fn record(&mut self, err: f64) {
        self.samples += 1;
        let err = if err.is_nan() { f64::INFINITY } else { err };
        self.max_error = self.max_error.max(err);
    }

    pub fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.max_error <= self.tolerance
    }

    /// Folds another outcome into this one, keeping this tolerance.
    pub fn absorb(&mut self, other: Outcome) {
        self.samples += other.samples;
        if other.max_error > other.tolerance {
            self.failures.push(alloc::format!(
                "sub-check error {} above its tolerance {}",
                other.max_error,
                other.tolerance
            ));
        }
        self.failures.extend(other.failures);
    }
}

//! The full verification suite and its grouping into acceptance criteria.

use crate::checks::{self, Job};
use crate::report::{Status, VerificationReport};

pub fn all_jobs() -> Vec<Job> {
    let mut jobs = checks::catalog::jobs();
    jobs.extend(checks::doubles::jobs());
    jobs.extend(checks::drill::jobs());
    jobs.extend(checks::simplex::jobs());
    jobs.extend(checks::weld::jobs());
    jobs.extend(checks::kernel::jobs());
    jobs
}

/// An acceptance criterion and the checks it consists of. A pattern ending
/// in `*` matches by prefix.
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub checks: &'static [&'static str],
}

pub const CRITERIA: [Criterion; 7] = [
    Criterion { id: 1, title: "catalog identities", checks: &["catalog.open01.inverse", "catalog.circle.image"] },
    Criterion {
        id: 2,
        title: "C2 regularity and plotted values",
        checks: &["catalog.c2_f1.regularity", "catalog.c2_f2.regularity", "catalog.c2_f3.regularity", "catalog.plotted_values"],
    },
    Criterion { id: 3, title: "Nash double invariants", checks: &["double.*"] },
    Criterion { id: 4, title: "drilling invariants", checks: &["drill.*"] },
    Criterion { id: 5, title: "simplicial erase, subdivision and order", checks: &["simplex.*"] },
    Criterion { id: 6, title: "orthant welding", checks: &["weld.*"] },
    Criterion { id: 7, title: "kernel derivatives and determinism", checks: &["expr.derivatives", "sets.sampling"] },
];

fn matches(pattern: &str, name: &str) -> bool {
    match pattern.strip_suffix('*') {
        Some(prefix) => name.starts_with(prefix),
        None => name == pattern,
    }
}

impl Criterion {
    pub fn covers(&self, name: &str) -> bool {
        self.checks.iter().any(|p| matches(p, name))
    }

    /// The reports belonging to this criterion. Every listed pattern must
    /// match at least one report for the criterion to be complete.
    pub fn select<'a>(&self, reports: &'a [VerificationReport]) -> Vec<&'a VerificationReport> {
        reports.iter().filter(|r| self.covers(&r.check)).collect()
    }

    /// Passes when every pattern is matched and no matched report failed or
    /// was skipped.
    pub fn evaluate(&self, reports: &[VerificationReport]) -> bool {
        let all_present = self.checks.iter().all(|p| reports.iter().any(|r| matches(p, &r.check)));
        all_present && self.select(reports).iter().all(|r| r.status == Status::Pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_job_belongs_to_a_criterion_or_is_auxiliary() {
        let names: Vec<String> = all_jobs().into_iter().map(|j| j.name).collect();
        for c in &CRITERIA {
            for p in c.checks {
                assert!(names.iter().any(|n| matches(p, n)), "criterion {} pattern {p} matches no job", c.id);
            }
        }
    }

    #[test]
    fn job_names_are_unique() {
        let mut names: Vec<String> = all_jobs().into_iter().map(|j| j.name).collect();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn prefix_patterns() {
        assert!(matches("weld.*", "weld.two_quadrants"));
        assert!(!matches("weld.*", "welding"));
        assert!(matches("sets.sampling", "sets.sampling"));
        assert!(!matches("sets.sampling", "sets.sampling2"));
    }
}

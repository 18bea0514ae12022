//! Acceptance criteria 1 to 7, each reported as one PASS/FAIL line.

use std::process::Command;

use nash_atlas::checks::run_jobs;
use nash_atlas::report::{Status, VerificationReport};
use nash_atlas::suite::{all_jobs, CRITERIA};

const SEED: u64 = 42;

/// Runs the binary's suite and returns its JSON with timing lines removed.
fn suite_json_without_timing() -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_nash-atlas"))
        .args(["suite", "--all", "--seed", &SEED.to_string(), "--json", "-"])
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "suite failed:\n{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).expect("utf-8 JSON");
    text.lines().filter(|l| !l.trim_start().starts_with("\"wall_ms\"")).collect::<Vec<_>>().join("\n")
}

fn describe(failing: &[&VerificationReport]) -> String {
    failing.iter().map(|r| format!("{} ({:?}): {:?}", r.check, r.status, r.failures)).collect::<Vec<_>>().join("; ")
}

fn main() {
    let reports = run_jobs(&all_jobs(), SEED, None);
    assert!(reports.windows(2).all(|w| w[0].check < w[1].check));
    for r in reports.iter().filter(|r| r.status == Status::Pass) {
        assert!(r.max_error <= r.tolerance, "{} passed with error {} over {}", r.check, r.max_error, r.tolerance);
    }
    let mut failed = Vec::new();
    for c in &CRITERIA {
        let mut ok = c.evaluate(&reports);
        let selected = c.select(&reports);
        let mut note = describe(&selected.iter().copied().filter(|r| r.status != Status::Pass).collect::<Vec<_>>());
        if c.id == 7 {
            let (a, b) = std::thread::scope(|s| {
                let first = s.spawn(suite_json_without_timing);
                (suite_json_without_timing(), first.join().expect("first run"))
            });
            if a != b {
                ok = false;
                note.push_str("two seeded runs gave different JSON");
            }
        }
        let checks = selected.iter().map(|r| r.check.as_str()).collect::<Vec<_>>().join(", ");
        if ok {
            println!("PASS criterion {}: {} [{checks}]", c.id, c.title);
        } else {
            println!("FAIL criterion {}: {} [{checks}] {note}", c.id, c.title);
            failed.push(c.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}


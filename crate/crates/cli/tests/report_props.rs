use std::time::Instant;

use nash_atlas::report::{Document, Status, VerificationReport};
use nash_atlas_core::report::Outcome;
use proptest::prelude::*;

const FIELDS: [&str; 9] = ["check", "citation", "status", "max_error", "tolerance", "samples", "seed", "wall_ms", "failures"];

fn report() -> impl Strategy<Value = VerificationReport> {
    ("[a-z]{1,6}\\.[a-z]{1,6}", proptest::collection::vec(0.0f64..1.0, 0..20), 0.0f64..1.0, 0usize..3, any::<u64>())
        .prop_map(|(name, errors, tol, fails, seed)| {
            let mut o = Outcome::new(tol);
            for e in errors {
                o.record(e);
            }
            for i in 0..fails {
                o.fail(format!("failure {i}"));
            }
            VerificationReport::from_outcome(&name, "claim", seed, o, Instant::now())
        })
}

proptest! {
    #[test]
    fn pass_implies_error_within_tolerance(r in report()) {
        if r.status == Status::Pass {
            prop_assert!(r.max_error <= r.tolerance);
            prop_assert!(r.failures.is_empty());
        }
    }

    #[test]
    fn documents_are_sorted_and_schema_stable(reports in proptest::collection::vec(report(), 0..8)) {
        let doc = Document::new("test", 1, reports, serde_json::Value::Null);
        prop_assert!(doc.checks.windows(2).all(|w| w[0].check <= w[1].check));
        prop_assert_eq!(doc.passed, doc.checks.iter().all(|c| c.status != Status::Fail));
        let v: serde_json::Value = serde_json::from_str(&doc.to_json()).unwrap();
        for c in v["checks"].as_array().unwrap() {
            let keys: Vec<&str> = c.as_object().unwrap().keys().map(String::as_str).collect();
            let mut sorted = FIELDS.to_vec();
            sorted.sort_unstable();
            prop_assert_eq!(keys, sorted);
        }
        let json = doc.to_json();
        let text = &json[json.find("\"checks\"").unwrap()..];
        let mut last = 0;
        for f in FIELDS {
            if doc.checks.is_empty() {
                break;
            }
            let at = text.find(&format!("\"{f}\"")).unwrap();
            prop_assert!(at >= last);
            last = at;
        }
    }
}

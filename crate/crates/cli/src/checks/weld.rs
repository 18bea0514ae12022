use nash_atlas_core::report::Outcome;
use nash_atlas_core::rng::SplitMix64;
use nash_atlas_core::weld::{component_count, mask_signs, reg_components, weld_sequence, OrthantSet, WeldStatus, WeldTrace};

use super::{expect, failed, CheckResult, Job};
use crate::formats::{format_signs, parse_orthants};
use crate::oracles::{flood_fill, random_family};

/// Grid points per axis of the flood-fill oracle.
pub const ORACLE_RES: usize = 41;
/// Largest `ℓ` handed to the oracle.
pub const ORACLE_MAX_ELL: usize = 3;

/// Component counts of the engine agree with the flood fill.
pub fn oracle_agreement(families: &[OrthantSet]) -> CheckResult {
    let mut out = Outcome::new(0.0);
    for f in families {
        let (a, b) = (component_count(f), flood_fill(f, ORACLE_RES));
        out.record(a.abs_diff(b) as f64);
        if a != b {
            out.fail(format!("{f}: engine {a}, flood fill {b}"));
        }
    }
    Ok(out)
}

const ORACLE_FAMILIES: usize = 200;

pub fn oracle_suite(seed: u64) -> CheckResult {
    let mut rng = SplitMix64::new(seed);
    let families: Vec<OrthantSet> =
        (0..ORACLE_FAMILIES).map(|_| { let ell = 1 + rng.below(ORACLE_MAX_ELL); random_family(&mut rng, ell) }).collect();
    oracle_agreement(&families)
}

/// Counts fall strictly along the trace, and the last count is that of
/// the final family.
pub fn trace_consistency(f: &OrthantSet, t: &WeldTrace) -> Outcome {
    let mut out = Outcome::new(0.0);
    expect(&mut out, t.counts.windows(2).all(|w| w[1] < w[0]), || format!("{f}: trace {:?} increases", t.counts));
    expect(&mut out, t.counts.len() == t.pivots.len() + 1, || format!("{f}: {} counts for {} pivots", t.counts.len(), t.pivots.len()));
    let last = *t.counts.last().expect("nonempty trace");
    expect(&mut out, component_count(&t.family) == last, || format!("{f}: final family does not have {last} components"));
    expect(&mut out, (t.status == WeldStatus::Connected) == (last == 1), || format!("{f}: status {:?} with {last} components", t.status));
    expect(&mut out, t.family.len() == f.len(), || format!("{f}: blow-ups changed the number of orthants"));
    out
}

const TRACE_FAMILIES: usize = 500;
const TRACE_MAX_ELL: usize = 4;

pub fn trace_suite(seed: u64) -> CheckResult {
    let mut rng = SplitMix64::new(seed);
    let mut out = Outcome::new(0.0);
    for _ in 0..TRACE_FAMILIES {
        let ell = 1 + rng.below(TRACE_MAX_ELL);
        let f = random_family(&mut rng, ell);
        let t = weld_sequence(&f);
        let o = trace_consistency(&f, &t);
        out.samples += o.samples;
        out.failures.extend(o.failures);
    }
    Ok(out)
}

/// `{(+,+), (-,-)}` welds in one blow-up with trace `[2, 1]`.
pub fn two_quadrants() -> CheckResult {
    let f = parse_orthants("++,--").map_err(failed)?;
    let t = weld_sequence(&f);
    let mut out = Outcome::new(0.0);
    expect(&mut out, t.counts == [2, 1], || format!("trace {:?}", t.counts));
    expect(&mut out, t.pivots == [0], || format!("pivots {:?}", t.pivots));
    expect(&mut out, t.status == WeldStatus::Connected, || format!("status {:?}", t.status));
    expect(&mut out, t.family.to_string() == "++,-+", || format!("final family {}", t.family));
    Ok(out)
}

pub fn components_as_signs(f: &OrthantSet) -> Vec<Vec<String>> {
    reg_components(f).iter().map(|c| c.iter().map(|&m| format_signs(&mask_signs(m, f.ell()))).collect()).collect()
}

pub fn jobs() -> Vec<Job> {
    vec![
        Job::new("weld.components_oracle", "regular-locus components of an orthant family match a grid flood fill", 0.0, |seed, _| {
            oracle_suite(seed)
        }),
        Job::new("weld.two_quadrants", "two opposite quadrants are welded by one blow-up of the origin", 0.0, |_, _| two_quadrants()),
        Job::new("weld.trace_non_increasing", "blow-ups of the origin never increase the component count along the trace", 0.0, |seed, _| {
            trace_suite(seed)
        }),
    ]
}

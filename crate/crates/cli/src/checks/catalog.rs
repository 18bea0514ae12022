use nash_atlas_core::catalog::{self, Interval1, NamedMap, IMAGE_GRID};
use nash_atlas_core::report::Outcome;
use nash_atlas_core::rng::SplitMix64;
use nash_atlas_core::{q, Q};
use num_traits::{Signed, ToPrimitive};

use super::{failed, CheckResult, Job};

/// Forward samples on unbounded domains are drawn from `[-SPREAD, SPREAD]`.
const SPREAD: f64 = 50.0;
const ROUND_TRIP_SAMPLES: usize = 1000;
const IMAGE_SAMPLES: usize = 1000;

fn map(name: &str) -> Result<NamedMap, super::CheckError> {
    catalog::make(name).map_err(failed)
}

fn sample(d: &Interval1, rng: &mut SplitMix64) -> f64 {
    let lo = d.lo.max(-SPREAD);
    let hi = d.hi.min(SPREAD);
    loop {
        let x = rng.uniform(lo, hi);
        if d.contains(x) {
            return x;
        }
    }
}

/// `inv(fwd(t)) = t` on seeded samples of the domain of `fwd`.
pub fn round_trip(fwd: &str, inv: &str, seed: u64, tol: f64) -> CheckResult {
    let (f, g) = (map(fwd)?, map(inv)?);
    let mut rng = SplitMix64::new(seed);
    let mut out = Outcome::new(tol);
    for _ in 0..ROUND_TRIP_SAMPLES {
        let t = sample(&f.domain, &mut rng);
        let y = f.eval(t).map_err(failed)?[0];
        match g.eval(y) {
            Ok(back) => out.record((back[0] - t).abs()),
            Err(e) => out.fail(format!("{inv} undefined at {fwd}({t}) = {y}: {e}")),
        }
    }
    Ok(out)
}

/// Forward containment and the surjectivity probe over the declared image.
pub fn image(name: &str, seed: u64, tol: f64) -> CheckResult {
    let m = map(name)?;
    let r = catalog::verify_image(&m, IMAGE_SAMPLES, seed).map_err(failed)?;
    let mut out = Outcome::new(tol);
    out.samples = r.samples + r.grid;
    out.max_error = r.max_residual;
    out.failures = r.failures;
    if r.grid != IMAGE_GRID {
        out.fail(format!("probe grid has {} points", r.grid));
    }
    Ok(out)
}

/// Exact C⁰, C¹, C² matching at the knots and monotonicity on a grid.
pub fn regularity(name: &str, tol: f64) -> CheckResult {
    let m = map(name)?;
    let r = catalog::verify_c2(&m, tol).map_err(failed)?;
    let mut out = Outcome::new(tol);
    out.samples = 3 * r.knots.len() + r.grid;
    out.max_error = r.max_error;
    out.failures = r.failures;
    if r.knots.is_empty() {
        out.fail(format!("{name} has no knots"));
    }
    Ok(out)
}

/// Values read off the plotted graphs, compared as rationals.
pub fn plotted_values(tol: f64) -> CheckResult {
    let mut out = Outcome::new(tol);
    for (name, t, expected) in [("c2_f1", q(1, 2), q(5, 12)), ("c2_f3", q(0, 1), q(-1, 5))] {
        let m = map(name)?;
        let pw = m.piecewise().ok_or_else(|| failed(format!("{name} is not piecewise")))?;
        let v: Q = pw.eval_q(&t);
        let err = (&v - &expected).abs();
        out.record(err.to_f64().unwrap_or(f64::INFINITY));
        if err > Q::from_float(tol).unwrap_or_default() {
            out.fail(format!("{name}({t}) = {v}, expected {expected}"));
        }
    }
    Ok(out)
}

pub const INVERSE_PAIRS: [(&str, &str); 2] = [("open01", "open01_inv"), ("orthant1d", "orthant1d_inv")];
pub const PIECEWISE: [&str; 3] = ["c2_f1", "c2_f2", "c2_f3"];

/// Every check that applies to the named map.
pub fn jobs_for(name: &'static str) -> Vec<Job> {
    let mut jobs = vec![Job::new(
        format!("catalog.{name}.image"),
        "the map sends its domain onto the declared image",
        catalog::IMAGE_TOL,
        move |seed, tol| image(name, seed, tol),
    )];
    if let Some(&(_, inv)) = INVERSE_PAIRS.iter().find(|(f, _)| *f == name) {
        jobs.push(Job::new(
            format!("catalog.{name}.inverse"),
            if name == "open01" {
                "open01_inv inverts the Nash diffeomorphism R -> (0,1)"
            } else {
                "orthant1d_inv inverts the Nash diffeomorphism (0,inf) -> R"
            },
            1e-9,
            move |seed, tol| round_trip(name, inv, seed, tol),
        ));
    }
    if PIECEWISE.contains(&name) {
        jobs.push(Job::new(
            format!("catalog.{name}.regularity"),
            "piecewise polynomial map is C2 at every knot and strictly increasing",
            0.0,
            move |_, tol| regularity(name, tol),
        ));
    }
    jobs
}

pub fn jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = catalog::NAMES.iter().flat_map(|n| jobs_for(n)).collect();
    jobs.push(Job::new(
        "catalog.plotted_values",
        "f1(1/2) = 5/12 and f3(0) = -1/5 on the plotted C2 maps",
        0.0,
        |_, tol| plotted_values(tol),
    ));
    jobs
}

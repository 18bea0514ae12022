use nash_atlas_core::expr::{random_expr, DomainBox, FD_STEP};
use nash_atlas_core::report::Outcome;
use nash_atlas_core::rng::SplitMix64;

use super::{expect, failed, CheckResult, Job};
use crate::formats::parse_set;

const EXPRESSIONS: usize = 50;
const POINTS_PER_EXPRESSION: usize = 10;
const DEPTH: u32 = 4;

/// Symbolic partial derivatives against central differences, with the
/// error measured relative to `max(1, |∂f|)`.
pub fn derivatives(seed: u64, tol: f64) -> CheckResult {
    let mut rng = SplitMix64::new(seed);
    let mut out = Outcome::new(tol);
    for _ in 0..EXPRESSIONS {
        let arity = 1 + rng.below(3);
        let f = random_expr(&mut rng, arity, DEPTH);
        let grad = f.gradient();
        for _ in 0..POINTS_PER_EXPRESSION {
            let x: Vec<f64> = (0..arity).map(|_| rng.uniform(-2.0, 2.0)).collect();
            for (i, g) in grad.iter().enumerate() {
                let sym = g.eval(&x).map_err(failed)?;
                let fd = f.partial_fd(i, &x, FD_STEP).map_err(failed)?;
                out.record((sym - fd).abs() / sym.abs().max(1.0));
            }
        }
    }
    Ok(out)
}

/// The set `{(4x^2 - y^2)(4y^2 - x^2) > 0, y > 0}` in the set file format.
pub const SAMPLE_SET: &str = "(4*x1^2 - x2^2)*(4*x2^2 - x1^2) > 0 && x2 > 0\n";
const CLOUD_POINTS: usize = 500;

/// Rejection samples satisfy membership, and equal seeds give bit-identical
/// clouds.
pub fn sampling(seed: u64) -> CheckResult {
    let set = parse_set(SAMPLE_SET).map_err(failed)?;
    let bx = DomainBox::cube(2, -2.0, 2.0);
    let a = set.sample(&bx, CLOUD_POINTS, seed).map_err(failed)?;
    let b = set.sample(&bx, CLOUD_POINTS, seed).map_err(failed)?;
    let mut out = Outcome::new(0.0);
    for p in &a.points {
        expect(&mut out, set.contains(p).map_err(failed)?, || format!("sampled point {p:?} is not in the set"));
    }
    let same = a.points.len() == b.points.len()
        && a.points.iter().zip(&b.points).all(|(p, q)| p.iter().zip(q).all(|(u, v)| u.to_bits() == v.to_bits()));
    expect(&mut out, same && a.rejected == b.rejected, || "equal seeds gave different clouds".into());
    Ok(out)
}

pub fn jobs() -> Vec<Job> {
    vec![
        Job::new("expr.derivatives", "symbolic derivatives of Nash expressions agree with finite differences", 1e-6, derivatives),
        Job::new("sets.sampling", "seeded rejection sampling is reproducible and stays in the set", 0.0, |seed, _| sampling(seed)),
    ]
}

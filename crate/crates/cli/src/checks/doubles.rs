use std::f64::consts::PI;

use nash_atlas_core::doubles::{self, BoundedModel, DoubleModel, ModelKind, BOUNDARY_EPS};
use nash_atlas_core::report::Outcome;
use nash_atlas_core::rng::SplitMix64;

use super::{expect, failed, merge, CheckResult, Job};

pub const MODELS: [(&str, ModelKind); 3] =
    [("interval", ModelKind::Interval), ("halfspace", ModelKind::HalfSpace), ("disk", ModelKind::Disk)];

pub fn model(kind: ModelKind) -> BoundedModel {
    match kind {
        ModelKind::Interval => BoundedModel::interval(),
        ModelKind::HalfSpace => BoundedModel::half_space(2),
        ModelKind::Disk => BoundedModel::disk(),
        ModelKind::Custom => unreachable!("only the explicit models are exposed"),
    }
}

fn double(kind: ModelKind, seed: u64) -> Result<DoubleModel, super::CheckError> {
    doubles::nash_double(&model(kind), seed).map_err(failed)
}

/// Points of `H`: the standard probe grid plus seeded samples of the chart box.
fn points_of_h(m: &BoundedModel, seed: u64) -> Vec<Vec<f64>> {
    let mut pts = doubles::onto_grid(m.kind);
    let mut rng = SplitMix64::new(seed);
    while pts.len() < 2000 {
        let x = m.chart_box.sample(&mut rng);
        if m.h_at(&x).is_ok_and(|h| h >= 0.0) {
            pts.push(x);
        }
    }
    pts
}

/// Fibers of the projection have two points over the interior and one over
/// the boundary, lie on `t^2 = h`, and the involution is an involution
/// whose fixed points are exactly those with `t = 0`.
pub fn fiber(kind: ModelKind, seed: u64, tol: f64) -> CheckResult {
    let dbl = double(kind, seed)?;
    let m = &dbl.model;
    let mut out = Outcome::new(tol);
    let (mut interior, mut boundary) = (0usize, 0usize);
    for x in points_of_h(m, seed) {
        let h = m.h_at(&x).map_err(failed)?;
        let fib = dbl.fiber(&x).map_err(failed)?;
        let want = if h > BOUNDARY_EPS { 2 } else { 1 };
        if want == 2 {
            interior += 1;
        } else {
            boundary += 1;
        }
        expect(&mut out, fib.len() == want, || format!("fiber over {x:?} (h = {h}) has {} points", fib.len()));
        for p in &fib {
            out.record(dbl.equation.eval(p).map_err(failed)?.abs());
            let tp = dbl.involute(p);
            expect(&mut out, dbl.involute(&tp) == *p, || format!("tau is not an involution at {p:?}"));
            let fixed = tp == *p;
            expect(&mut out, fixed == (p[m.dim] == 0.0), || format!("fixed-point mismatch at {p:?}"));
            expect(&mut out, dbl.project(p) == x, || format!("{p:?} does not project to {x:?}"));
        }
    }
    if interior == 0 || boundary == 0 {
        out.fail(format!("probe hit {interior} interior and {boundary} boundary points"));
    }
    Ok(out)
}

/// Boundary points at which the local square chart is checked.
fn boundary_points(kind: ModelKind, rng: &mut SplitMix64) -> Vec<Vec<f64>> {
    match kind {
        ModelKind::Interval => vec![vec![0.0]],
        ModelKind::HalfSpace => {
            let mut v = vec![vec![0.0, 0.0]];
            v.extend((0..4).map(|_| vec![0.0, rng.uniform(-2.0, 2.0)]));
            v
        }
        _ => {
            let mut v = vec![vec![1.0, 0.0]];
            v.extend((0..4).map(|_| {
                let a = rng.uniform(0.0, 2.0 * PI);
                vec![a.cos(), a.sin()]
            }));
            v
        }
    }
}

pub const SQUARE_SAMPLES: usize = 100;

/// Near each boundary point the projection reads `(y1, y') -> (y1^2, y')`.
pub fn square(kind: ModelKind, seed: u64, tol: f64) -> CheckResult {
    let dbl = double(kind, seed)?;
    let mut rng = SplitMix64::new(seed);
    let mut out = Outcome::new(tol);
    for b in boundary_points(kind, &mut rng) {
        let r = dbl.verify_local_square(&b, tol, SQUARE_SAMPLES, rng.next_u64()).map_err(failed)?;
        merge(&mut out, r);
    }
    Ok(out)
}

/// The interior of `H` maps onto `H`: every grid point has a preimage.
pub fn onto(kind: ModelKind, tol: f64) -> CheckResult {
    let f = doubles::interior_onto(&model(kind)).map_err(failed)?;
    Ok(f.verify_onto(&doubles::onto_grid(kind), tol))
}

/// Points of the double over seeded points of `H`, as `(x..., t)` rows.
pub fn cloud(kind: ModelKind, n: usize, seed: u64) -> Result<Vec<Vec<f64>>, super::CheckError> {
    let dbl = double(kind, seed)?;
    let m = &dbl.model;
    let mut rng = SplitMix64::new(seed);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let x = m.chart_box.sample(&mut rng);
        if let Ok(fib) = dbl.fiber(&x) {
            pts.push(fib[rng.below(fib.len())].clone());
        }
    }
    Ok(pts)
}

pub const CHECKS: [&str; 3] = ["fiber", "square", "onto"];

pub fn job(name: &'static str, kind: ModelKind, check: &str) -> Job {
    let full = format!("double.{name}.{check}");
    match check {
        "fiber" => Job::new(full, "D(H) double-covers the interior and is fixed by tau exactly over the boundary", 1e-9, move |s, t| {
            fiber(kind, s, t)
        }),
        "square" => Job::new(full, "near the boundary the projection of D(H) is a square in one coordinate", 1e-6, move |s, t| {
            square(kind, s, t)
        }),
        "onto" => Job::new(full, "a Nash map from the interior of H onto H", 1e-6, move |_, t| onto(kind, t)),
        other => unreachable!("unknown double check {other}"),
    }
}

pub fn jobs() -> Vec<Job> {
    MODELS.iter().flat_map(|&(name, kind)| CHECKS.iter().map(move |c| job(name, kind, c))).collect()
}

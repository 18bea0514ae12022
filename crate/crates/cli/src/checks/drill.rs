use std::collections::BTreeMap;
use std::sync::Arc;

use nash_atlas_core::drill::{self, CenterSpec, DrillError, DrillPoint};
use nash_atlas_core::expr::NashExpr;
use nash_atlas_core::linalg::{dist, norm};
use nash_atlas_core::report::Outcome;
use nash_atlas_core::rng::SplitMix64;
use nash_atlas_core::q;

use super::{expect, failed, merge, CheckError, CheckResult, Job};
use crate::formats::{parse_drill_spec, DrillSpecFile};

/// Drillings exercised by the suite, in the spec file format.
pub const STANDARD_SPECS: [(&str, &str); 7] = [
    ("plane", "ambient 2\ncenter 0\n"),
    ("line_in_space", "ambient 3\ncenter 1\n"),
    ("plane_generators", "ambient 2\ncenter 0\ngenerators x1; x2\nchange 1; 1\n"),
    ("twisted", "ambient 2\ncenter 0\ngenerators x1; x2 + x1*x2\nchange x1^2; -3\n"),
    ("rational", "ambient 2\ncenter 0\ngenerators x1/(1 + x2^2); x2*sqrt(1 + x1^2)\nchange 2; x1\n"),
    ("curved_line", "ambient 3\ncenter 1\nzeta 1, x1, x3^2; x2, 1 + x1^2, 0\n"),
    ("circle", "ambient 3\ncenter 1 general\ngenerators x1^2 + x2^2 - 1; x3\nchange x2; 1\n"),
];

/// Coordinate drillings `R^e × {0} ⊂ R^d` for the erase check.
pub const ERASE_SPECS: [(&str, &str); 4] = [
    ("d1e0", "ambient 1\ncenter 0\n"),
    ("d2e0", "ambient 2\ncenter 0\n"),
    ("d3e1", "ambient 3\ncenter 1\n"),
    ("d3e0", "ambient 3\ncenter 0\n"),
];

pub fn standard(list: &[(&str, &str)]) -> Vec<DrillSpecFile> {
    list.iter().map(|(name, text)| parse_drill_spec(text).unwrap_or_else(|e| panic!("built-in spec {name}: {e}"))).collect()
}

fn lift(e: DrillError) -> CheckError {
    match e {
        DrillError::UnsupportedSpec => CheckError::Unsupported("the spec has no chart or no generators".into()),
        other => failed(other),
    }
}

const TRIPLES: usize = 1000;

fn random_triple(spec: &CenterSpec, rng: &mut SplitMix64) -> (Vec<f64>, f64, Vec<f64>) {
    let y = (0..spec.e).map(|_| rng.uniform(-1.0, 1.0)).collect();
    (y, rng.uniform(-1.0, 1.0), rng.unit_vector(spec.d - spec.e))
}

/// Every sampled point of the drilling has a unit sphere coordinate.
pub fn unit_norm(spec: &CenterSpec, seed: u64, tol: f64) -> CheckResult {
    let mut out = Outcome::new(tol);
    for p in spec.sample_points(TRIPLES, seed).map_err(lift)? {
        out.record((norm(&p.dir) - 1.0).abs());
    }
    Ok(out)
}

/// `psi0∘Φ = id` on chart triples and `Φ∘psi0 = id` on their images.
pub fn round_trip(spec: &CenterSpec, seed: u64, tol: f64) -> CheckResult {
    let mut rng = SplitMix64::new(seed);
    let mut out = Outcome::new(tol);
    for _ in 0..TRIPLES {
        let (y, rho, w) = random_triple(spec, &mut rng);
        let p = spec.phi(&y, rho, &w).map_err(lift)?;
        let t = spec.psi0(&p).map_err(lift)?;
        let back = spec.phi(&t.y, t.rho, &t.w).map_err(lift)?;
        let err = dist(&t.y, &y)
            .max((t.rho - rho).abs())
            .max(dist(&t.w, &w))
            .max(dist(&back.base, &p.base))
            .max(dist(&back.dir, &p.dir));
        out.record(err);
    }
    Ok(out)
}

const CENTER_POINTS: usize = 20;
const FIBER_DIRECTIONS: usize = 50;

/// Over center points the boundary fiber is a unit sphere inside the span
/// of the normal directions.
pub fn fiber(spec: &CenterSpec, seed: u64, tol: f64) -> CheckResult {
    let mut rng = SplitMix64::new(seed);
    let mut out = Outcome::new(tol);
    for q in spec.center_points(CENTER_POINTS, rng.next_u64()).map_err(lift)? {
        let sphere = spec.fiber_over(&q).map_err(lift)?;
        for _ in 0..FIBER_DIRECTIONS {
            let b = sphere.map(&rng.unit_vector(spec.d - spec.e));
            out.record((norm(&b) - 1.0).abs().max(sphere.span_residual(&b)));
        }
    }
    Ok(out)
}

/// Points `(q, b)` of the boundary sphere over seeded center points.
pub fn fiber_cloud(spec: &CenterSpec, n: usize, seed: u64) -> Result<Vec<DrillPoint>, CheckError> {
    let mut rng = SplitMix64::new(seed);
    let centers = spec.center_points(CENTER_POINTS, rng.next_u64()).map_err(lift)?;
    (0..n)
        .map(|i| {
            let q = &centers[i % centers.len()];
            let sphere = spec.fiber_over(q).map_err(lift)?;
            Ok(DrillPoint { base: q.clone(), dir: sphere.map(&rng.unit_vector(spec.d - spec.e)) })
        })
        .collect()
}

const LOCAL_REP_BASES: usize = 3;
const LOCAL_REP_SAMPLES: usize = 100;

/// The local representation of the projection around boundary points.
pub fn local_rep(spec: &CenterSpec, seed: u64, tol: f64) -> CheckResult {
    let mut rng = SplitMix64::new(seed);
    let mut out = Outcome::new(tol);
    for _ in 0..LOCAL_REP_BASES {
        let y0: Vec<f64> = (0..spec.e).map(|_| rng.uniform(-0.5, 0.5)).collect();
        let w0 = rng.unit_vector(spec.d - spec.e);
        let r = spec.local_rep_check(&y0, &w0, tol, LOCAL_REP_SAMPLES, rng.next_u64()).map_err(lift)?;
        merge(&mut out, r);
    }
    Ok(out)
}

/// Changing generators from `f` to `(f, Σ g_j f_j)` commutes with the
/// projections.
pub fn generators(spec: &CenterSpec, g: Option<&[NashExpr]>, seed: u64, tol: f64) -> CheckResult {
    let g = match g {
        Some(g) => g.to_vec(),
        None => vec![NashExpr::constant(spec.d, q(1, 1)); spec.k],
    };
    let change = spec.change_generators(g).map_err(lift)?;
    change.verify(TRIPLES, seed, tol).map_err(lift)
}

/// The comparison with the classical blow-up, `(a, b) -> (a, [b])`, is
/// exactly two-to-one: each fiber is `{p, σ(p)}`.
pub fn classical(spec: &CenterSpec, seed: u64) -> CheckResult {
    let pts = spec.sample_points(TRIPLES, seed).map_err(lift)?;
    let mut fibers: BTreeMap<Vec<u64>, Vec<DrillPoint>> = BTreeMap::new();
    for p in pts.iter().flat_map(|p| [p.clone(), p.sigma()]) {
        let (x, l) = drill::classical_compare(&p);
        let key = x.iter().chain(&l).map(|v| v.to_bits()).collect();
        let fiber = fibers.entry(key).or_default();
        if !fiber.contains(&p) {
            fiber.push(p);
        }
    }
    let mut out = Outcome::new(0.0);
    for f in fibers.values() {
        expect(&mut out, f.len() == 2 && f[0] == f[1].sigma(), || format!("classical fiber of size {}: {f:?}", f.len()));
    }
    if fibers.len() != TRIPLES {
        out.fail(format!("{} samples gave {} classical points", TRIPLES, fibers.len()));
    }
    Ok(out)
}

/// The erase map `M \ N -> M` reaches every point of a grid of `[-2, 2]^d`.
pub fn erase(spec: &CenterSpec, tol: f64) -> CheckResult {
    let h = drill::erase(spec).map_err(lift)?;
    Ok(h.verify_grid(&drill::erase_grid(spec.d), tol))
}

pub const CHECKS: [&str; 7] = ["unit_norm", "round_trip", "fiber", "local_rep", "generators", "classical", "erase"];

/// The names accepted by `drill --check`, with the checks each one runs.
pub fn expand(cli_check: &str) -> Option<&'static [&'static str]> {
    Some(match cli_check {
        "phi" => &["unit_norm", "round_trip"],
        "fiber" => &["fiber"],
        "localrep" => &["local_rep"],
        "generators" => &["generators"],
        "classical" => &["classical"],
        "erase" => &["erase"],
        _ => return None,
    })
}

fn citation(check: &str) -> &'static str {
    match check {
        "unit_norm" => "the drilling lies in M x S^(k-1): direction coordinates have unit norm",
        "round_trip" => "psi0 inverts the chart map Phi of the drilling",
        "fiber" => "the fiber over a center point is the unit sphere of the normal space",
        "local_rep" => "in local coordinates the projection is (y, r, v) -> (y, r, r v)",
        "generators" => "the drillings for f and (f, sum g_j f_j) are identified over M",
        "classical" => "the drilling maps two-to-one onto the classical blow-up",
        _ => "the interior of the drilling maps onto M",
    }
}

fn default_tol(check: &str) -> f64 {
    match check {
        "unit_norm" => 1e-12,
        "local_rep" | "erase" => 1e-6,
        "classical" => 0.0,
        _ => 1e-9,
    }
}

/// Runs `check` on every spec in `specs`, skipping those it does not apply
/// to; unsupported everywhere is reported as unsupported.
fn run_over(check: &str, specs: &[DrillSpecFile], seed: u64, tol: f64) -> CheckResult {
    let mut out = Outcome::new(tol);
    let mut ran = 0;
    for (i, s) in specs.iter().enumerate() {
        let seed = seed.wrapping_add(i as u64);
        let r = match check {
            "unit_norm" => unit_norm(&s.spec, seed, tol),
            "round_trip" => round_trip(&s.spec, seed, tol),
            "fiber" => fiber(&s.spec, seed, tol),
            "local_rep" => local_rep(&s.spec, seed, tol),
            "generators" => generators(&s.spec, s.change.as_deref(), seed, tol),
            "classical" => classical(&s.spec, seed),
            "erase" => erase(&s.spec, tol),
            other => unreachable!("unknown drill check {other}"),
        };
        match r {
            Ok(o) => {
                ran += 1;
                merge(&mut out, o);
            }
            Err(CheckError::Unsupported(_)) if specs.len() > 1 => {}
            Err(e) => return Err(e),
        }
    }
    if ran == 0 {
        return Err(CheckError::Unsupported(format!("no spec supports {check}")));
    }
    Ok(out)
}

pub fn job(check: &'static str, specs: Arc<Vec<DrillSpecFile>>) -> Job {
    Job::new(format!("drill.{check}"), citation(check), default_tol(check), move |seed, tol| {
        run_over(check, &specs, seed, tol)
    })
}

pub fn jobs() -> Vec<Job> {
    let specs = Arc::new(standard(&STANDARD_SPECS));
    let mut jobs: Vec<Job> = CHECKS.iter().filter(|c| **c != "erase").map(|c| job(c, specs.clone())).collect();
    let mut erase_specs = standard(&ERASE_SPECS);
    erase_specs.extend(standard(&STANDARD_SPECS));
    jobs.push(job("erase", Arc::new(erase_specs)));
    jobs
}

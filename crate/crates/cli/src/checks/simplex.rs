use nash_atlas_core::report::Outcome;
use nash_atlas_core::rng::SplitMix64;
use nash_atlas_core::simplicial::{
    check_subdivision, erase_homeo, subdivide, Complex, Point, Simplex, SimplicialError,
};
use nash_atlas_core::{q, Q};
use num_traits::{ToPrimitive, Zero};

use super::{expect, failed, merge, CheckError, CheckResult, Job};
use crate::formats::parse_simplices;
use crate::oracles::{grid_patch, vertex_joined_pair};

const FIXED_PAIRS: &str = "\
(0, 0); (1, 0); (0, 1)
(1, 1); (1, 0); (0, 1)
(0, 0, 0); (2, 0, 0); (0, 3, 0); (1, 1, -2)
(0, 0, 0); (2, 0, 0); (0, 3, 0); (3, 4, 1)
(-1); (0)
(0); (3)
(1/2, -1/3); (4, 1/5); (-2, 3)
(1/2, -1/3); (4, 1/5); (7/3, -5)
";

const RANDOM_PAIRS: usize = 20;
const ERASE_SAMPLES: usize = 200;
const BOUNDARY_SAMPLES: usize = 50;

fn sim(e: SimplicialError) -> CheckError {
    failed(e)
}

/// The erase homeomorphism of one glued pair: the exact sampled checks plus
/// pointwise fixing of every facet of `σ2` other than `τ`.
pub fn erase_pair(s1: &Simplex, s2: &Simplex, seed: u64) -> CheckResult {
    let e = erase_homeo(s1, s2).map_err(sim)?;
    let mut out = e.verify(ERASE_SAMPLES, seed);
    let mut rng = SplitMix64::new(seed ^ 0x5eed);
    for facet in s2.facets() {
        if facet.key() == e.tau.key() {
            continue;
        }
        for _ in 0..BOUNDARY_SAMPLES {
            let x = facet.sample_rational(&mut rng, 12);
            let moved = e.psi.eval(&x).map_err(sim)?;
            expect(&mut out, moved == x, || format!("boundary point {x:?} moved to {moved:?}"));
        }
    }
    Ok(out)
}

fn random_point(rng: &mut SplitMix64, n: usize) -> Point {
    (0..n).map(|_| q(rng.below(13) as i64 - 6, 1 + rng.below(3) as i64)).collect()
}

/// A random pair of `n`-simplices glued along a common facet on opposite
/// sides of it.
fn random_pair(rng: &mut SplitMix64) -> (Simplex, Simplex) {
    loop {
        let n = 1 + rng.below(3);
        let tau: Vec<Point> = (0..n).map(|_| random_point(rng, n)).collect();
        let mut v1 = tau.clone();
        v1.push(random_point(rng, n));
        let mut v2 = tau;
        v2.push(random_point(rng, n));
        if let (Ok(a), Ok(b)) = (Simplex::new(v1), Simplex::new(v2)) {
            if erase_homeo(&a, &b).is_ok() {
                return (a, b);
            }
        }
    }
}

pub fn erase_suite(seed: u64) -> CheckResult {
    let fixed = parse_simplices(FIXED_PAIRS).map_err(failed)?;
    let mut pairs: Vec<(Simplex, Simplex)> = fixed.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect();
    let mut rng = SplitMix64::new(seed);
    pairs.extend((0..RANDOM_PAIRS).map(|_| random_pair(&mut rng)));
    let mut out = Outcome::new(0.0);
    for (i, (a, b)) in pairs.iter().enumerate() {
        merge(&mut out, erase_pair(a, b, seed.wrapping_add(i as u64))?);
    }
    Ok(out)
}

/// Subdividing along the chosen facets tiles the simplex: the parts form a
/// complex, and their volumes sum exactly to the volume of the simplex.
pub fn subdivide_one(s: &Simplex, facets: &[usize]) -> CheckResult {
    let parts = subdivide(s, facets).map_err(sim)?;
    let mut out = Outcome::new(0.0);
    let total = parts.iter().map(|p| p.volume()).collect::<Result<Vec<Q>, _>>().map_err(sim)?;
    let sum = total.into_iter().fold(Q::zero(), |a, b| a + b);
    let vol = s.volume().map_err(sim)?;
    let gap = (&sum - &vol).to_f64().unwrap_or(f64::INFINITY).abs();
    out.record(gap);
    if sum != vol {
        out.fail(format!("part volumes sum to {sum}, simplex volume is {vol}"));
    }
    if let Err(e) = check_subdivision(s, &parts) {
        out.fail(e.to_string());
    }
    Ok(out)
}

const RANDOM_SIMPLICES: usize = 50;

pub fn subdivide_suite(seed: u64) -> CheckResult {
    let mut rng = SplitMix64::new(seed);
    let mut out = Outcome::new(0.0);
    let mut done = 0;
    while done < RANDOM_SIMPLICES {
        let n = 1 + rng.below(4);
        let vs: Vec<Point> = (0..=n).map(|_| (0..n).map(|_| q(rng.below(21) as i64 - 10, 1 + rng.below(4) as i64)).collect()).collect();
        let Ok(s) = Simplex::new(vs) else { continue };
        let mut idx: Vec<usize> = (0..=n).collect();
        rng.shuffle(&mut idx);
        idx.truncate(1 + rng.below(n + 1));
        merge(&mut out, subdivide_one(&s, &idx)?);
        done += 1;
    }
    Ok(out)
}

/// The facet-adjacency order of a complex, checked against the validity
/// predicate.
pub fn order_one(c: &Complex) -> Result<(Vec<usize>, Outcome), CheckError> {
    let order = c.order_d_simplices().map_err(sim)?;
    let mut out = Outcome::new(0.0);
    expect(&mut out, c.is_valid_order(&order), || format!("order {order:?} violates the adjacency condition"));
    Ok((order, out))
}

const RANDOM_COMPLEXES: usize = 20;

pub fn order_suite(seed: u64) -> CheckResult {
    let mut rng = SplitMix64::new(seed);
    let mut out = Outcome::new(0.0);
    for _ in 0..RANDOM_COMPLEXES {
        let cells = 1 + rng.below(25);
        let c = Complex::new(grid_patch(&mut rng, cells)).map_err(sim)?;
        let (_, o) = order_one(&c)?;
        merge(&mut out, o);
    }
    let apart = Complex::new(vertex_joined_pair()).map_err(sim)?;
    expect(&mut out, apart.order_d_simplices() == Err(SimplicialError::DisconnectedAdjacency), || {
        "a complex without facet paths was ordered".into()
    });
    expect(&mut out, !apart.is_valid_order(&[0, 1]) && !apart.is_valid_order(&[1, 0]), || {
        "the validity predicate accepted a disconnected complex".into()
    });
    Ok(out)
}

pub fn jobs() -> Vec<Job> {
    vec![
        Job::new(
            "simplex.erase",
            "erasing a facet: psi fixes the outer boundary of sigma2 and is a bijection onto the union",
            0.0,
            |seed, _| erase_suite(seed),
        ),
        Job::new("simplex.subdivide", "subdividing along chosen facets tiles the simplex", 0.0, |seed, _| {
            subdivide_suite(seed)
        }),
        Job::new(
            "simplex.order",
            "top simplices of a facet-connected complex admit an order with each meeting an earlier one in a facet",
            0.0,
            |seed, _| order_suite(seed),
        ),
    ]
}

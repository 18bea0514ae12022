use alloc::collections::VecDeque;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::q;
use crate::rng::SplitMix64;

fn lin(a: Q, b: Q) -> Polynomial {
    &Polynomial::var(1, 0).scale(&a) + &Polynomial::constant(1, b)
}

fn t() -> Polynomial {
    lin(q(1, 1), q(0, 1))
}

fn fam(s: &str) -> OrthantSet {
    let signs: Vec<Vec<i8>> = s.split(',').map(|w| w.chars().map(|c| if c == '+' { 1 } else { -1 }).collect()).collect();
    OrthantSet::new(signs[0].len(), &signs).unwrap()
}

/// Counts connected components of the interior of the closure of the union
/// of the orthants in `f`, sampled on an odd grid of `[-1, 1]^ℓ`.
fn flood_fill(f: &OrthantSet, res: usize) -> usize {
    let ell = f.ell();
    let half = (res / 2) as i64;
    let total = res.pow(ell as u32);
    let coords = |mut i: usize| -> Vec<i64> {
        (0..ell)
            .map(|_| {
                let c = (i % res) as i64 - half;
                i /= res;
                c
            })
            .collect()
    };
    let inside = |x: &[i64]| -> bool {
        let zeros: Vec<usize> = (0..ell).filter(|&k| x[k] == 0).collect();
        let base = (0..ell).filter(|&k| x[k] < 0).fold(0u64, |m, k| m | 1 << k);
        (0..1u64 << zeros.len()).all(|choice| {
            let m = zeros.iter().enumerate().fold(base, |m, (j, &k)| if choice >> j & 1 == 1 { m | 1 << k } else { m });
            f.contains_mask(m)
        })
    };
    let mut seen = vec![false; total];
    let mut count = 0;
    for start in 0..total {
        if seen[start] || !inside(&coords(start)) {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let x = coords(i);
            let mut stride = 1;
            for k in 0..ell {
                for step in [-1i64, 1] {
                    let c = x[k] + step;
                    if c.abs() > half {
                        continue;
                    }
                    let j = (i as i64 + step * stride as i64) as usize;
                    let mut y = x.clone();
                    y[k] = c;
                    if !seen[j] && inside(&y) {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
                stride *= res;
            }
        }
    }
    count
}

fn all_families(ell: usize) -> impl Iterator<Item = OrthantSet> {
    (1u64..1 << (1u64 << ell)).map(move |bits| OrthantSet::from_masks(ell, (0..1u64 << ell).filter(|m| bits >> m & 1 == 1)).unwrap())
}

#[test]
fn eta_examples() {
    let half = q(1, 2);
    let bp = vec![q(0, 1), half.clone(), q(1, 1)];
    let same = PiecewisePolyPath::new(bp.clone(), vec![vec![t(), t()], vec![t(), t()]]).unwrap();
    assert!(eta(&same).is_empty());
    let kink = PiecewisePolyPath::new(bp, vec![vec![t(), t()], vec![t(), lin(q(2, 1), q(-1, 2))]]).unwrap();
    assert_eq!(eta(&kink), vec![vec![half.clone(), half]]);
    // Three pieces; only the second junction is a corner.
    let bp3 = vec![q(0, 1), q(1, 3), q(2, 3), q(1, 1)];
    let sq = &t() * &t();
    let path = PiecewisePolyPath::new(
        bp3,
        vec![vec![t(), sq.clone()], vec![t(), sq], vec![t(), lin(q(4, 3), q(-4, 9))]],
    )
    .unwrap();
    assert_eq!(eta(&path), vec![vec![q(2, 3), q(4, 9)]]);
    let single = PiecewisePolyPath::new(vec![q(0, 1), q(1, 1)], vec![vec![t()]]).unwrap();
    assert!(eta(&single).is_empty());
}

#[test]
fn invalid_paths() {
    let bp = vec![q(0, 1), q(1, 2), q(1, 1)];
    let gap = PiecewisePolyPath::new(bp.clone(), vec![vec![t()], vec![lin(q(1, 1), q(1, 1))]]);
    assert!(matches!(gap, Err(WeldError::InvalidPath(_))));
    let unordered = PiecewisePolyPath::new(vec![q(0, 1), q(1, 1), q(1, 1)], vec![vec![t()], vec![t()]]);
    assert!(matches!(unordered, Err(WeldError::InvalidPath(_))));
    let short = PiecewisePolyPath::new(bp, vec![vec![t()]]);
    assert!(matches!(short, Err(WeldError::InvalidPath(_))));
}

#[test]
fn component_examples() {
    assert_eq!(reg_components(&fam("++,--")).len(), 2);
    assert_eq!(reg_components(&fam("++,-+")), vec![vec![0b00, 0b01]]);
    for ell in 1..=6 {
        assert_eq!(component_count(&OrthantSet::full(ell).unwrap()), 1);
    }
    assert_eq!(flood_fill(&fam("++,--"), 101), 2);
    assert_eq!(flood_fill(&fam("++,-+"), 101), 1);
}

#[test]
fn components_match_flood_fill_exhaustively() {
    for ell in 1..=3 {
        for f in all_families(ell) {
            assert_eq!(component_count(&f), flood_fill(&f, 9), "{f}");
        }
    }
}

#[test]
fn family_validation() {
    assert_eq!(OrthantSet::new(2, &[]), Err(WeldError::EmptyFamily));
    assert_eq!(OrthantSet::new(2, &[vec![1, 0]]), Err(WeldError::BadSignVector(vec![1, 0])));
    assert_eq!(OrthantSet::new(2, &[vec![1]]), Err(WeldError::BadSignVector(vec![1])));
    assert_eq!(fam("++,++,--").len(), 2);
    assert_eq!(fam("-+,+-").to_string(), "-+,+-");
    assert_eq!(fam("+-").signs(), vec![vec![1, -1]]);
}

#[test]
fn bridge_examples() {
    let b = bridge(&[-1, -1], &[1, 1]).unwrap();
    assert_eq!(b.terms, vec![(1, 1), (1, 1)]);
    assert_eq!(b.to_string(), "(t, t)");
    let same = bridge(&[1, -1], &[1, -1]).unwrap();
    assert_eq!(same.terms, vec![(1, 2), (-1, 2)]);
    let mixed = bridge(&[-1, 1], &[1, 1]).unwrap();
    assert_eq!(mixed.to_string(), "(t, t^2)");
    for b in [b, same, mixed] {
        assert!(b.verify(100));
    }
    assert!(bridge(&[1, 0], &[1, 1]).is_err());
}

#[test]
fn blowup_examples() {
    assert_eq!(blowup_origin(&fam("++,--"), 0).unwrap(), fam("++,-+"));
    assert_eq!(blowup_origin(&fam("+-"), 0).unwrap(), fam("+-"));
    let full = OrthantSet::full(3).unwrap();
    for p in 0..3 {
        assert_eq!(blowup_origin(&full, p).unwrap(), full);
    }
    assert_eq!(blowup_origin(&fam("++"), 2), Err(WeldError::PivotOutOfRange { pivot: 2, ell: 2 }));
}

#[test]
fn weld_examples() {
    let two = weld_sequence(&fam("++,--"));
    assert_eq!((two.pivots.clone(), two.counts.clone(), two.status), (vec![0], vec![2, 1], WeldStatus::Connected));
    assert_eq!(two.family, fam("++,-+"));
    let done = weld_sequence(&fam("++,+-,-+"));
    assert!(done.pivots.is_empty() && done.counts == vec![1]);
}

#[test]
fn three_orthants_at_even_distance_never_weld() {
    // Pairwise Hamming distances are 2, and a pivot step sends distance d to
    // d or ℓ + 1 - d = 2, so no sequence of blow-ups joins them.
    let f = fam("+++,--+,-+-");
    let trace = weld_sequence(&f);
    assert_eq!((trace.counts.clone(), trace.status), (vec![3], WeldStatus::Stalled));
    let mut frontier = vec![f];
    for _ in 0..4 {
        frontier = frontier.iter().flat_map(|g| (0..3).map(move |p| blowup_origin(g, p).unwrap())).collect();
        assert!(frontier.iter().all(|g| flood_fill(g, 5) == 3));
    }
}

#[test]
fn opposite_pairs_are_welded_without_loss() {
    // Two components containing an opposite pair: the best pivot step
    // never increases the count.
    for ell in 2..=4 {
        let full = (1u64 << ell) - 1;
        let res = if ell == 4 { 5 } else { 41 };
        for f in all_families(ell) {
            if component_count(&f) != 2 || !f.masks().any(|m| f.contains_mask(m ^ full)) {
                continue;
            }
            let best = (0..ell).map(|p| component_count(&blowup_origin(&f, p).unwrap())).min().unwrap();
            assert!(best <= 2, "{f}");
            if ell <= 2 || f.len() <= 3 {
                for p in 0..ell {
                    let g = blowup_origin(&f, p).unwrap();
                    assert_eq!(component_count(&g), flood_fill(&g, res), "{g}");
                }
            }
        }
    }
}

fn random_family(rng: &mut SplitMix64, ell: usize) -> OrthantSet {
    loop {
        let masks: Vec<u64> = (0..1u64 << ell).filter(|_| rng.coin()).collect();
        if let Ok(f) = OrthantSet::from_masks(ell, masks) {
            return f;
        }
    }
}

proptest! {
    #[test]
    fn prop_trace_non_increasing(seed in any::<u64>(), ell in 1usize..=4) {
        let f = random_family(&mut SplitMix64::new(seed), ell);
        let trace = weld_sequence(&f);
        prop_assert!(trace.counts.windows(2).all(|w| w[1] < w[0]));
        prop_assert_eq!(trace.counts.len(), trace.pivots.len() + 1);
        prop_assert_eq!(trace.status == WeldStatus::Connected, *trace.counts.last().unwrap() == 1);
        prop_assert_eq!(component_count(&trace.family), *trace.counts.last().unwrap());
    }

    #[test]
    fn prop_blowup_is_an_involution(seed in any::<u64>(), ell in 1usize..=6) {
        let mut rng = SplitMix64::new(seed);
        let f = random_family(&mut rng, ell);
        let p = rng.below(ell);
        let g = blowup_origin(&f, p).unwrap();
        prop_assert_eq!(g.len(), f.len());
        prop_assert_eq!(blowup_origin(&g, p).unwrap(), f);
    }

    #[test]
    fn prop_bridges_cross_between_orthants(seed in any::<u64>(), ell in 1usize..=8) {
        let mut rng = SplitMix64::new(seed);
        let mut s = || -> Vec<i8> { (0..ell).map(|_| if rng.coin() { 1 } else { -1 }).collect() };
        let (a, b) = (s(), s());
        prop_assert!(bridge(&a, &b).unwrap().verify(100));
    }

    #[test]
    fn prop_eta_bounded_by_breakpoints(seed in any::<u64>(), pieces in 1usize..6) {
        // Random continuous piecewise linear paths in the plane.
        let mut rng = SplitMix64::new(seed);
        let bp: Vec<Q> = (0..=pieces).map(|i| q(i as i64, pieces as i64)).collect();
        let mut start = vec![q(0, 1), q(0, 1)];
        let mut segs = Vec::new();
        for i in 0..pieces {
            let slopes = [q(rng.below(3) as i64, 1), q(rng.below(3) as i64, 1)];
            let seg: Vec<Polynomial> = (0..2).map(|k| lin(slopes[k].clone(), &start[k] - &slopes[k] * &bp[i])).collect();
            start = seg.iter().map(|p| p.eval_q(core::slice::from_ref(&bp[i + 1]))).collect();
            segs.push(seg);
        }
        let path = PiecewisePolyPath::new(bp, segs.clone()).unwrap();
        let corners = (1..pieces).filter(|&i| segs[i] != segs[i - 1]).count();
        prop_assert_eq!(eta(&path).len(), corners);
        prop_assert!(corners < pieces);
    }
}

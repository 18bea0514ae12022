//! Independent reference computations and seeded generators used by the
//! suite.

use std::collections::VecDeque;

use nash_atlas_core::q;
use nash_atlas_core::rng::SplitMix64;
use nash_atlas_core::simplicial::Simplex;
use nash_atlas_core::weld::OrthantSet;

/// Counts the connected components of the interior of the closure of the
/// union of the orthants in `f`, on an odd grid of `[-1, 1]^ℓ` with `res`
/// points per axis. A grid point is kept when every orthant around it
/// belongs to `f`; kept points connect to their axis neighbours.
pub fn flood_fill(f: &OrthantSet, res: usize) -> usize {
    assert!(res % 2 == 1, "the grid must contain the origin");
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
            let m = zeros
                .iter()
                .enumerate()
                .fold(base, |m, (j, &k)| if choice >> j & 1 == 1 { m | 1 << k } else { m });
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
            let mut stride = 1i64;
            for k in 0..ell {
                for step in [-1i64, 1] {
                    let c = x[k] + step;
                    if c.abs() > half {
                        continue;
                    }
                    let j = (i as i64 + step * stride) as usize;
                    let mut y = x.clone();
                    y[k] = c;
                    if !seen[j] && inside(&y) {
                        seen[j] = true;
                        queue.push_back(j);
                    }
                }
                stride *= res as i64;
            }
        }
    }
    count
}

/// A nonempty family on `ℓ` orthants, each orthant kept with probability 1/2.
pub fn random_family(rng: &mut SplitMix64, ell: usize) -> OrthantSet {
    loop {
        let masks: Vec<u64> = (0..1u64 << ell).filter(|_| rng.coin()).collect();
        if let Ok(f) = OrthantSet::from_masks(ell, masks) {
            return f;
        }
    }
}

fn triangle(a: [i64; 2], b: [i64; 2], c: [i64; 2]) -> Simplex {
    let p = |v: [i64; 2]| vec![q(v[0], 1), q(v[1], 1)];
    Simplex::new(vec![p(a), p(b), p(c)]).expect("grid triangles are nondegenerate")
}

/// The lower or upper triangle of the unit grid square at `(x, y)`.
fn grid_triangle(x: i64, y: i64, up: bool) -> Simplex {
    if up {
        triangle([x + 1, y + 1], [x, y + 1], [x + 1, y])
    } else {
        triangle([x, y], [x + 1, y], [x, y + 1])
    }
}

/// A facet-connected patch of the triangulated integer grid with `cells`
/// triangles, grown from one cell by random facet steps and listed in
/// shuffled order.
pub fn grid_patch(rng: &mut SplitMix64, cells: usize) -> Vec<Simplex> {
    let mut chosen: Vec<(i64, i64, bool)> = vec![(0, 0, false)];
    while chosen.len() < cells {
        let (x, y, up) = chosen[rng.below(chosen.len())];
        let candidates = if up {
            [(x, y, false), (x, y + 1, false), (x + 1, y, false)]
        } else {
            [(x, y, true), (x, y - 1, true), (x - 1, y, true)]
        };
        let c = candidates[rng.below(3)];
        if !chosen.contains(&c) {
            chosen.push(c);
        }
    }
    rng.shuffle(&mut chosen);
    chosen.into_iter().map(|(x, y, up)| grid_triangle(x, y, up)).collect()
}

/// Two triangles that share only a vertex, so no facet path joins them.
pub fn vertex_joined_pair() -> Vec<Simplex> {
    vec![grid_triangle(0, 0, false), grid_triangle(1, 1, false)]
}

#[cfg(test)]
mod tests {
    use nash_atlas_core::simplicial::Complex;
    use nash_atlas_core::weld::component_count;

    use super::*;

    fn fam(words: &[&str]) -> OrthantSet {
        let signs: Vec<Vec<i8>> = words.iter().map(|w| w.chars().map(|c| if c == '+' { 1 } else { -1 }).collect()).collect();
        OrthantSet::new(signs[0].len(), &signs).unwrap()
    }

    #[test]
    fn flood_fill_examples() {
        assert_eq!(flood_fill(&fam(&["++", "--"]), 41), 2);
        assert_eq!(flood_fill(&fam(&["++", "-+"]), 41), 1);
        assert_eq!(flood_fill(&fam(&["++", "+-", "-+"]), 41), 1);
        assert_eq!(flood_fill(&OrthantSet::full(3).unwrap(), 5), 1);
        assert_eq!(flood_fill(&fam(&["+++", "--+", "-+-"]), 21), 3);
        assert_eq!(flood_fill(&fam(&["+", "-"]), 41), 1);
        assert_eq!(flood_fill(&fam(&["-"]), 41), 1);
    }

    #[test]
    fn flood_fill_agrees_with_the_engine_on_small_families() {
        for ell in 1..=2usize {
            for bits in 1u64..1 << (1u64 << ell) {
                let f = OrthantSet::from_masks(ell, (0..1u64 << ell).filter(|m| bits >> m & 1 == 1)).unwrap();
                assert_eq!(flood_fill(&f, 11), component_count(&f), "{f}");
            }
        }
    }

    #[test]
    fn patches_are_complexes() {
        let mut rng = SplitMix64::new(3);
        for cells in [1, 5, 12] {
            let c = Complex::new(grid_patch(&mut rng, cells)).unwrap();
            assert_eq!(c.simplices().len(), cells);
        }
        assert!(Complex::new(vertex_joined_pair()).is_ok());
    }
}

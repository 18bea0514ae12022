use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::rng::SplitMix64;
use crate::Q;

/// Closed product of intervals; infinite endpoints are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainBox {
    bounds: Vec<(f64, f64)>,
}

impl DomainBox {
    pub fn new(bounds: Vec<(f64, f64)>) -> Self {
        for &(lo, hi) in &bounds {
            assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        }
        DomainBox { bounds }
    }

    pub fn unbounded(dim: usize) -> Self {
        DomainBox { bounds: alloc::vec![(f64::NEG_INFINITY, f64::INFINITY); dim] }
    }

    pub fn cube(dim: usize, lo: f64, hi: f64) -> Self {
        Self::new(alloc::vec![(lo, hi); dim])
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn is_bounded(&self) -> bool {
        self.bounds.iter().all(|(lo, hi)| lo.is_finite() && hi.is_finite())
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(&self.bounds).all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    pub fn contains_q(&self, x: &[Q]) -> bool {
        x.len() == self.dim()
            && x.iter().zip(&self.bounds).all(|(v, (lo, hi))| {
                let v = v.to_f64().unwrap_or(f64::NAN);
                *lo <= v && v <= *hi
            })
    }

    pub fn intersect(&self, other: &DomainBox) -> DomainBox {
        assert_eq!(self.dim(), other.dim());
        DomainBox {
            bounds: self
                .bounds
                .iter()
                .zip(&other.bounds)
                .map(|(a, b)| {
                    let lo = a.0.max(b.0);
                    (lo, a.1.min(b.1).max(lo))
                })
                .collect(),
        }
    }

    /// The box with every infinite endpoint replaced by `±limit`.
    pub fn truncated(&self, limit: f64) -> DomainBox {
        DomainBox {
            bounds: self
                .bounds
                .iter()
                .map(|&(lo, hi)| (lo.max(-limit), hi.min(limit)))
                .collect(),
        }
    }

    /// Uniform point of the box. Panics if the box is unbounded.
    pub fn sample(&self, rng: &mut SplitMix64) -> Vec<f64> {
        assert!(self.is_bounded(), "cannot sample an unbounded box");
        self.bounds.iter().map(|&(lo, hi)| rng.uniform(lo, hi)).collect()
    }

    /// Product grid with `per_axis` points per coordinate, endpoints included.
    pub fn grid(&self, per_axis: usize) -> Vec<Vec<f64>> {
        assert!(self.is_bounded() && per_axis >= 2);
        let mut out: Vec<Vec<f64>> = alloc::vec![Vec::new()];
        for &(lo, hi) in &self.bounds {
            let mut next = Vec::with_capacity(out.len() * per_axis);
            for p in &out {
                for k in 0..per_axis {
                    let mut q = p.clone();
                    q.push(lo + (hi - lo) * k as f64 / (per_axis - 1) as f64);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }
}

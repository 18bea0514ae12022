//! Welding calculus for orthant germs: the non-Nash points of polynomial
//! paths, bridge arcs between orthants, regular-locus components of a union
//! of open orthants, and the greedy blow-up sequence that connects them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::expr::Polynomial;
use crate::Q;

/// Largest supported sign dimension.
pub const MAX_ELL: usize = 63;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum WeldError {
    #[error("pivot {pivot} out of range for sign dimension {ell}")]
    PivotOutOfRange { pivot: usize, ell: usize },
    #[error("invalid sign vector {0:?}")]
    BadSignVector(Vec<i8>),
    #[error("orthant family is empty")]
    EmptyFamily,
    #[error("sign dimension {0} is not supported")]
    BadDimension(usize),
    #[error("invalid path: {0}")]
    InvalidPath(String),
}

/// A polynomial path `[0, 1] -> R^n` with rational breakpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePolyPath {
    breakpoints: Vec<Q>,
    pieces: Vec<Vec<Polynomial>>,
}

impl PiecewisePolyPath {
    /// `pieces[i]` is the coordinate list on `[t_i, t_{i+1}]`, each a
    /// polynomial in one variable.
    pub fn new(breakpoints: Vec<Q>, pieces: Vec<Vec<Polynomial>>) -> Result<Self, WeldError> {
        let bad = |m: &str| Err(WeldError::InvalidPath(m.into()));
        if breakpoints.len() < 2 || pieces.len() != breakpoints.len() - 1 {
            return bad("need m + 1 breakpoints for m pieces");
        }
        if !breakpoints[0].is_zero() || breakpoints[breakpoints.len() - 1] != crate::q(1, 1) {
            return bad("breakpoints must run from 0 to 1");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must increase strictly");
        }
        let n = pieces[0].len();
        if pieces.iter().flatten().any(|p| p.arity() != 1) || pieces.iter().any(|p| p.len() != n) {
            return bad("pieces must be univariate with a common target dimension");
        }
        for i in 1..pieces.len() {
            let t = [breakpoints[i].clone()];
            let left: Vec<Q> = pieces[i - 1].iter().map(|p| p.eval_q(&t)).collect();
            let right: Vec<Q> = pieces[i].iter().map(|p| p.eval_q(&t)).collect();
            if left != right {
                return Err(WeldError::InvalidPath(format!("pieces {} and {} disagree at t = {}", i - 1, i, t[0])));
            }
        }
        Ok(PiecewisePolyPath { breakpoints, pieces })
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<Polynomial>] {
        &self.pieces
    }

    pub fn eval_q(&self, t: &Q) -> Vec<Q> {
        let i = (1..self.pieces.len()).take_while(|&i| &self.breakpoints[i] <= t).count();
        self.pieces[i].iter().map(|p| p.eval_q(core::slice::from_ref(t))).collect()
    }
}

/// Images of the interior breakpoints where the adjacent pieces differ as
/// polynomials, which are exactly the points where the path is not Nash.
pub fn eta(path: &PiecewisePolyPath) -> Vec<Vec<Q>> {
    (1..path.pieces.len())
        .filter(|&i| path.pieces[i - 1] != path.pieces[i])
        .map(|i| path.eval_q(&path.breakpoints[i]))
        .collect()
}

/// A family of open orthants `{ε_1 x_1 > 0, ..., ε_ℓ x_ℓ > 0}`, stored as
/// bitmasks with bit `k` set when `ε_k = -1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrthantSet {
    ell: usize,
    family: BTreeSet<u64>,
}

impl OrthantSet {
    pub fn new(ell: usize, signs: &[Vec<i8>]) -> Result<Self, WeldError> {
        let masks = signs
            .iter()
            .map(|s| {
                if s.len() != ell || s.iter().any(|&v| v != 1 && v != -1) {
                    return Err(WeldError::BadSignVector(s.clone()));
                }
                Ok(s.iter().enumerate().filter(|(_, &v)| v < 0).fold(0u64, |m, (k, _)| m | 1 << k))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_masks(ell, masks)
    }

    pub fn from_masks(ell: usize, masks: impl IntoIterator<Item = u64>) -> Result<Self, WeldError> {
        if ell == 0 || ell > MAX_ELL {
            return Err(WeldError::BadDimension(ell));
        }
        let family: BTreeSet<u64> = masks.into_iter().collect();
        if family.is_empty() {
            return Err(WeldError::EmptyFamily);
        }
        if family.iter().any(|&m| m >> ell != 0) {
            return Err(WeldError::BadDimension(ell));
        }
        Ok(OrthantSet { ell, family })
    }

    /// Every orthant of `R^ℓ`.
    pub fn full(ell: usize) -> Result<Self, WeldError> {
        if ell == 0 || ell > 20 {
            return Err(WeldError::BadDimension(ell));
        }
        Self::from_masks(ell, 0..1u64 << ell)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn masks(&self) -> impl Iterator<Item = u64> + '_ {
        self.family.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn contains_mask(&self, m: u64) -> bool {
        self.family.contains(&m)
    }

    pub fn signs(&self) -> Vec<Vec<i8>> {
        self.family.iter().map(|&m| mask_signs(m, self.ell)).collect()
    }
}

pub fn mask_signs(m: u64, ell: usize) -> Vec<i8> {
    (0..ell).map(|k| if m >> k & 1 == 1 { -1 } else { 1 }).collect()
}

impl fmt::Display for OrthantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &m) in self.family.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            for k in 0..self.ell {
                f.write_str(if m >> k & 1 == 1 { "-" } else { "+" })?;
            }
        }
        Ok(())
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Components of the regular locus: orthants sharing a facet (sign vectors
/// at Hamming distance one) glue across it. Components are listed by their
/// smallest mask, each sorted.
pub fn reg_components(f: &OrthantSet) -> Vec<Vec<u64>> {
    let masks: Vec<u64> = f.masks().collect();
    let index: BTreeMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut dsu = Dsu { parent: (0..masks.len()).collect() };
    for (i, &m) in masks.iter().enumerate() {
        for k in 0..f.ell {
            if let Some(&j) = index.get(&(m ^ 1 << k)) {
                dsu.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for (i, &m) in masks.iter().enumerate() {
        let r = dsu.find(i);
        groups.entry(r).or_default().push(m);
    }
    groups.into_values().collect()
}

pub fn component_count(f: &OrthantSet) -> usize {
    reg_components(f).len()
}

/// Sign-vector pullback under `x_k -> x_pivot x_k` (`k != pivot`):
/// `ε'_pivot = ε_pivot`, `ε'_k = ε_pivot ε_k`.
pub fn blowup_origin(f: &OrthantSet, pivot: usize) -> Result<OrthantSet, WeldError> {
    if pivot >= f.ell {
        return Err(WeldError::PivotOutOfRange { pivot, ell: f.ell });
    }
    let others = ((1u64 << f.ell) - 1) & !(1 << pivot);
    let family = f.masks().map(|m| if m >> pivot & 1 == 1 { m ^ others } else { m }).collect();
    Ok(OrthantSet { ell: f.ell, family })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeldStatus {
    Connected,
    Stalled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeldTrace {
    pub pivots: Vec<usize>,
    /// Component counts before the first step and after each step.
    pub counts: Vec<usize>,
    pub family: OrthantSet,
    pub status: WeldStatus,
}

/// Greedy welding: repeatedly blow up along the pivot that minimizes the
/// component count (lowest pivot on ties), while the count strictly drops.
pub fn weld_sequence(f: &OrthantSet) -> WeldTrace {
    let mut family = f.clone();
    let mut counts = vec![component_count(&family)];
    let mut pivots = Vec::new();
    loop {
        let current = *counts.last().expect("nonempty");
        if current == 1 {
            return WeldTrace { pivots, counts, family, status: WeldStatus::Connected };
        }
        let (best, next, c) = (0..family.ell)
            .map(|p| {
                let g = blowup_origin(&family, p).expect("pivot in range");
                let c = component_count(&g);
                (p, g, c)
            })
            .min_by_key(|(p, _, c)| (*c, *p))
            .expect("ell >= 1");
        if c >= current {
            return WeldTrace { pivots, counts, family, status: WeldStatus::Stalled };
        }
        pivots.push(best);
        counts.push(c);
        family = next;
    }
}

/// A monomial arc `β_k(t) = c_k t^{p_k}` through the origin, leaving the
/// orthant `from` at `t < 0` and entering `to` at `t > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bridge {
    pub from: Vec<i8>,
    pub to: Vec<i8>,
    pub terms: Vec<(i8, u32)>,
}

/// Half-width of the parameter interval of a bridge.
pub fn bridge_delta() -> Q {
    crate::q(1, 2)
}

pub fn bridge(from: &[i8], to: &[i8]) -> Result<Bridge, WeldError> {
    for s in [from, to] {
        if s.iter().any(|&v| v != 1 && v != -1) {
            return Err(WeldError::BadSignVector(s.to_vec()));
        }
    }
    if from.len() != to.len() || from.is_empty() {
        return Err(WeldError::BadSignVector(to.to_vec()));
    }
    let terms = from.iter().zip(to).map(|(&a, &b)| if a == b { (b, 2) } else { (b, 1) }).collect();
    Ok(Bridge { from: from.to_vec(), to: to.to_vec(), terms })
}

impl Bridge {
    pub fn eval(&self, t: &Q) -> Vec<Q> {
        self.terms.iter().map(|&(c, p)| Q::from_integer(c.into()) * num_traits::pow(t.clone(), p as usize)).collect()
    }

    /// `β(0) = 0` and the sign conditions at `t = ±k δ / samples`.
    pub fn verify(&self, samples: usize) -> bool {
        if self.eval(&Q::zero()).iter().any(|v| !v.is_zero()) {
            return false;
        }
        let delta = bridge_delta();
        (1..=samples).all(|k| {
            let t = &delta * Q::new((k as i64).into(), (samples as i64).into());
            let in_orthant = |x: &[Q], s: &[i8]| x.iter().zip(s).all(|(v, &e)| if e > 0 { v.is_positive() } else { v.is_negative() });
            in_orthant(&self.eval(&t), &self.to) && in_orthant(&self.eval(&-t.clone()), &self.from)
        })
    }
}

impl fmt::Display for Bridge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, &(c, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            let sign = if c < 0 { "-" } else { "" };
            match p {
                1 => write!(f, "{sign}t")?,
                _ => write!(f, "{sign}t^{p}")?,
            }
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests;

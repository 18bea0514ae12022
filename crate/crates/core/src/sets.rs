//! Semialgebraic sets in disjunctive normal form over polynomial sign
//! conditions, with membership tests and seeded rejection sampling.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::expr::{DomainBox, Polynomial};
use crate::linalg::norm;
use crate::rng::SplitMix64;
use crate::Q;

/// Relative width of the band in which `p = 0` is accepted.
pub const EQ_TOL: f64 = 1e-9;
/// Rejection-sampling trials allowed per requested point.
pub const TRIALS_PER_POINT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SetError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no point accepted after {trials} trials")]
    EmptyAfterBudget { trials: u64 },
    #[error("sampling box must be bounded and have the set's dimension")]
    BadBox,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Relation {
    pub fn negate(self) -> Relation {
        match self {
            Relation::Lt => Relation::Ge,
            Relation::Le => Relation::Gt,
            Relation::Eq => Relation::Ne,
            Relation::Ne => Relation::Eq,
            Relation::Ge => Relation::Lt,
            Relation::Gt => Relation::Le,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    fn holds_exact(self, v: &Q) -> bool {
        match self {
            Relation::Lt => v.is_negative(),
            Relation::Le => !v.is_positive(),
            Relation::Eq => v.is_zero(),
            Relation::Ne => !v.is_zero(),
            Relation::Ge => !v.is_negative(),
            Relation::Gt => v.is_positive(),
        }
    }

    fn holds(self, v: f64, eq_band: f64) -> bool {
        match self {
            Relation::Lt => v < 0.0,
            Relation::Le => v <= 0.0,
            Relation::Eq => v.abs() <= eq_band,
            Relation::Ne => v.abs() > eq_band,
            Relation::Ge => v >= 0.0,
            Relation::Gt => v > 0.0,
        }
    }
}

/// The condition `poly rel 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignAtom {
    pub poly: Polynomial,
    pub rel: Relation,
}

impl SignAtom {
    pub fn new(poly: Polynomial, rel: Relation) -> Self {
        SignAtom { poly, rel }
    }

    pub fn negate(&self) -> SignAtom {
        SignAtom { poly: self.poly.clone(), rel: self.rel.negate() }
    }

    fn constant_truth(&self) -> Option<bool> {
        self.poly.as_constant().map(|c| self.rel.holds_exact(&c))
    }
}

impl fmt::Display for SignAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.poly, self.rel.symbol())
    }
}

/// A union of conjunctions of sign atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiSet {
    dim: usize,
    conjunctions: Vec<Vec<SignAtom>>,
}

impl SemiSet {
    pub fn new(dim: usize, conjunctions: Vec<Vec<SignAtom>>) -> Result<Self, SetError> {
        for atom in conjunctions.iter().flatten() {
            if atom.poly.arity() != dim {
                return Err(SetError::DimensionMismatch { expected: dim, found: atom.poly.arity() });
            }
        }
        Ok(Self::normalized(dim, conjunctions))
    }

    pub fn empty(dim: usize) -> Self {
        SemiSet { dim, conjunctions: Vec::new() }
    }

    pub fn universe(dim: usize) -> Self {
        SemiSet { dim, conjunctions: vec![vec![Self::true_atom(dim)]] }
    }

    fn true_atom(dim: usize) -> SignAtom {
        SignAtom::new(Polynomial::constant(dim, Q::from_integer(1.into())), Relation::Gt)
    }

    /// Folds constant atoms, removes duplicates and drops unsatisfiable
    /// conjunctions. A conjunction left with no atoms makes the set the
    /// whole space, stored as the single atom `1 > 0`.
    fn normalized(dim: usize, conjunctions: Vec<Vec<SignAtom>>) -> Self {
        let mut out: Vec<Vec<SignAtom>> = Vec::new();
        for conj in conjunctions {
            let mut atoms: Vec<SignAtom> = Vec::new();
            let mut dead = false;
            for a in conj {
                match a.constant_truth() {
                    Some(true) => {}
                    Some(false) => dead = true,
                    None => {
                        if !atoms.contains(&a) {
                            atoms.push(a);
                        }
                    }
                }
            }
            if dead {
                continue;
            }
            if atoms.is_empty() {
                return Self::universe(dim);
            }
            if !out.contains(&atoms) {
                out.push(atoms);
            }
        }
        SemiSet { dim, conjunctions: out }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conjunctions(&self) -> &[Vec<SignAtom>] {
        &self.conjunctions
    }

    pub fn is_syntactically_empty(&self) -> bool {
        self.conjunctions.is_empty()
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool, SetError> {
        if x.len() != self.dim {
            return Err(SetError::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        let band = EQ_TOL * (1.0 + norm(x));
        Ok(self
            .conjunctions
            .iter()
            .any(|c| c.iter().all(|a| a.rel.holds(a.poly.eval(x), band))))
    }

    /// Exact membership of a rational point.
    pub fn contains_q(&self, x: &[Q]) -> Result<bool, SetError> {
        if x.len() != self.dim {
            return Err(SetError::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(self
            .conjunctions
            .iter()
            .any(|c| c.iter().all(|a| a.rel.holds_exact(&a.poly.eval_q(x)))))
    }

    fn check_dim(&self, other: &SemiSet) -> Result<(), SetError> {
        if self.dim != other.dim {
            return Err(SetError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn union(&self, other: &SemiSet) -> Result<SemiSet, SetError> {
        self.check_dim(other)?;
        let all = self.conjunctions.iter().chain(&other.conjunctions).cloned().collect();
        Ok(Self::normalized(self.dim, all))
    }

    pub fn intersection(&self, other: &SemiSet) -> Result<SemiSet, SetError> {
        self.check_dim(other)?;
        let mut all = Vec::with_capacity(self.conjunctions.len() * other.conjunctions.len());
        for a in &self.conjunctions {
            for b in &other.conjunctions {
                all.push(a.iter().chain(b).cloned().collect());
            }
        }
        Ok(Self::normalized(self.dim, all))
    }

    /// De Morgan followed by distribution back into DNF.
    pub fn complement(&self) -> SemiSet {
        let mut acc = Self::universe(self.dim);
        for conj in &self.conjunctions {
            let negated = Self::normalized(
                self.dim,
                conj.iter().map(|a| vec![a.negate()]).collect(),
            );
            acc = acc.intersection(&negated).expect("same dimension");
        }
        acc
    }

    /// Draws up to `n` points of the set by rejection from `bx`.
    pub fn sample(&self, bx: &DomainBox, n: usize, seed: u64) -> Result<SampleCloud, SetError> {
        if bx.dim() != self.dim || !bx.is_bounded() {
            return Err(SetError::BadBox);
        }
        let mut rng = SplitMix64::new(seed);
        let budget = TRIALS_PER_POINT.saturating_mul(n.max(1) as u64);
        let mut points = Vec::with_capacity(n);
        let mut trials = 0u64;
        while points.len() < n && trials < budget {
            trials += 1;
            let p = bx.sample(&mut rng);
            if self.contains(&p)? {
                points.push(p);
            }
        }
        if points.is_empty() {
            return Err(SetError::EmptyAfterBudget { trials });
        }
        let accepted = points.len() as u64;
        Ok(SampleCloud { points, seed, bbox: bx.clone(), accepted, rejected: trials - accepted })
    }
}

impl fmt::Display for SemiSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, conj) in self.conjunctions.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, a) in conj.iter().enumerate() {
                if j > 0 {
                    write!(f, " && ")?;
                }
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleCloud {
    pub points: Vec<Vec<f64>>,
    pub seed: u64,
    pub bbox: DomainBox,
    pub accepted: u64,
    pub rejected: u64,
}

impl SampleCloud {
    pub fn acceptance_ratio(&self) -> f64 {
        self.accepted as f64 / (self.accepted + self.rejected) as f64
    }
}

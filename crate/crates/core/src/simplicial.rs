//! Exact rational simplices and complexes: barycentric coordinates, the Nash
//! chart of an open simplex, erasing a simplex across a shared facet,
//! cone subdivisions and facet-connected orderings.

pub mod lp;

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::expr::{DomainBox, NashExpr, NashMap, Polynomial};
use crate::linalg::{det_q, rank_q, solve_q};
use crate::report::Outcome;
use crate::rng::SplitMix64;
use crate::{q, Q};

pub type Point = Vec<Q>;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SimplicialError {
    #[error("vertices are affinely dependent")]
    AffinelyDependent,
    #[error("points live in different ambient spaces")]
    DimensionMismatch,
    #[error("point is outside the affine hull")]
    OutsideAffineHull,
    #[error("simplex is not full-dimensional")]
    DegenerateSimplex,
    #[error("simplices do not share exactly one facet from opposite sides")]
    NotFacetAdjacent,
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("invalid facet selection {0:?}")]
    InvalidFacetSelection(Vec<usize>),
    #[error("top-dimensional simplices are not facet-connected")]
    DisconnectedAdjacency,
    #[error("simplices {0} and {1} coincide")]
    DuplicateSimplex(usize, usize),
    #[error("simplices {0} and {1} do not meet in a common face")]
    BadIntersection(usize, usize),
    #[error("cell maps {0} and {1} disagree on their common face")]
    InconsistentMap(usize, usize),
    #[error("point is not in the domain of the map")]
    NotInDomain,
    #[error("subdivision volumes sum to {found}, expected {expected}")]
    VolumeMismatch { expected: Box<Q>, found: Box<Q> },
}

type Result<T> = core::result::Result<T, SimplicialError>;

fn sub(a: &[Q], b: &[Q]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |acc, k| acc * q(k, 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let Some(first) = vertices.first() else { return Err(SimplicialError::AffinelyDependent) };
        let m = first.len();
        if vertices.iter().any(|v| v.len() != m) {
            return Err(SimplicialError::DimensionMismatch);
        }
        let edges: Vec<Point> = vertices[1..].iter().map(|v| sub(v, first)).collect();
        if vertices.len() > m + 1 || rank_q(&edges) != vertices.len() - 1 {
            return Err(SimplicialError::AffinelyDependent);
        }
        Ok(Simplex { vertices })
    }

    /// `{x_i >= 0, Σ x_i <= 1}` in `R^n`.
    pub fn standard(n: usize) -> Self {
        let mut vertices = vec![vec![Q::zero(); n]];
        for i in 0..n {
            let mut e = vec![Q::zero(); n];
            e[i] = Q::one();
            vertices.push(e);
        }
        Simplex { vertices }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Sorted vertex list, identifying the simplex as a set.
    pub fn key(&self) -> Vec<Point> {
        let mut k = self.vertices.clone();
        k.sort();
        k
    }

    pub fn barycentric(&self, x: &[Q]) -> Result<Vec<Q>> {
        if x.len() != self.ambient() {
            return Err(SimplicialError::DimensionMismatch);
        }
        let n = self.vertices.len();
        let mut rows: Vec<Vec<Q>> = (0..self.ambient())
            .map(|r| self.vertices.iter().map(|v| v[r].clone()).collect())
            .collect();
        rows.push(vec![Q::one(); n]);
        let mut rhs = x.to_vec();
        rhs.push(Q::one());
        solve_q(&rows, &rhs).ok_or(SimplicialError::OutsideAffineHull)
    }

    pub fn point_at(&self, weights: &[Q]) -> Point {
        let mut p = vec![Q::zero(); self.ambient()];
        for (v, w) in self.vertices.iter().zip(weights) {
            for (pi, vi) in p.iter_mut().zip(v) {
                *pi += w * vi;
            }
        }
        p
    }

    pub fn barycenter(&self) -> Point {
        let w = Q::new(1.into(), (self.vertices.len() as i64).into());
        self.point_at(&vec![w; self.vertices.len()])
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.barycentric(x).is_ok_and(|l| l.iter().all(|v| !v.is_negative()))
    }

    /// Membership in the relative interior.
    pub fn contains_interior(&self, x: &[Q]) -> bool {
        self.barycentric(x).is_ok_and(|l| l.iter().all(|v| v.is_positive()))
    }

    /// Membership in the relative boundary (empty for a point).
    pub fn boundary_contains(&self, x: &[Q]) -> bool {
        self.dim() > 0 && self.contains(x) && !self.contains_interior(x)
    }

    /// The facet opposite vertex `i`.
    pub fn facet(&self, i: usize) -> Simplex {
        let mut vertices = self.vertices.clone();
        vertices.remove(i);
        Simplex { vertices }
    }

    pub fn facets(&self) -> Vec<Simplex> {
        (0..self.vertices.len()).map(|i| self.facet(i)).collect()
    }

    /// Euclidean volume of a full-dimensional simplex.
    pub fn volume(&self) -> Result<Q> {
        if self.dim() != self.ambient() {
            return Err(SimplicialError::DegenerateSimplex);
        }
        let edges: Vec<Point> = self.vertices[1..].iter().map(|v| sub(v, &self.vertices[0])).collect();
        Ok(det_q(&edges).abs() / factorial(self.dim()))
    }

    fn bbox(&self) -> (Point, Point) {
        let mut lo = self.vertices[0].clone();
        let mut hi = lo.clone();
        for v in &self.vertices[1..] {
            for i in 0..v.len() {
                if v[i] < lo[i] {
                    lo[i] = v[i].clone();
                }
                if v[i] > hi[i] {
                    hi[i] = v[i].clone();
                }
            }
        }
        (lo, hi)
    }

    /// A seeded rational point with barycentric weights drawn from
    /// `0..=spread` (not all zero), so faces are hit with positive frequency.
    pub fn sample_rational(&self, rng: &mut SplitMix64, spread: usize) -> Point {
        loop {
            let w: Vec<u64> = self.vertices.iter().map(|_| rng.below(spread + 1) as u64).collect();
            let total: u64 = w.iter().sum();
            if total > 0 {
                let weights: Vec<Q> = w.iter().map(|&k| Q::new(k.into(), total.into())).collect();
                return self.point_at(&weights);
            }
        }
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            f.write_str("(")?;
            for (j, c) in v.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Whether `s ∩ t` is empty or the face spanned by their common vertices.
/// A point of `s ∩ t` lies in that face iff its `s`-weights vanish on the
/// vertices `t` lacks, so one exact program decides it.
pub fn meet_in_common_face(s: &Simplex, t: &Simplex) -> bool {
    let (slo, shi) = s.bbox();
    let (tlo, thi) = t.bbox();
    if (0..slo.len()).any(|i| shi[i] < tlo[i] || thi[i] < slo[i]) {
        return true;
    }
    let (ns, nt, m) = (s.vertices.len(), t.vertices.len(), s.ambient());
    let mut a = Vec::with_capacity(m + 2);
    for r in 0..m {
        let mut row: Vec<Q> = s.vertices.iter().map(|v| v[r].clone()).collect();
        row.extend(t.vertices.iter().map(|v| -v[r].clone()));
        a.push(row);
    }
    let mut sum_s = vec![Q::one(); ns];
    sum_s.resize(ns + nt, Q::zero());
    let mut sum_t = vec![Q::zero(); ns];
    sum_t.resize(ns + nt, Q::one());
    a.push(sum_s);
    a.push(sum_t);
    let mut b = vec![Q::zero(); m];
    b.push(Q::one());
    b.push(Q::one());
    let mut c: Vec<Q> = s
        .vertices
        .iter()
        .map(|v| if t.vertices.contains(v) { Q::zero() } else { Q::one() })
        .collect();
    c.resize(ns + nt, Q::zero());
    match lp::maximize(&a, &b, &c) {
        lp::LpOutcome::Infeasible => true,
        lp::LpOutcome::Optimal { value, .. } => value.is_zero(),
        lp::LpOutcome::Unbounded => false,
    }
}

/// A finite simplicial complex with an index from facets to the simplices
/// containing them.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    simplices: Vec<Simplex>,
    facet_index: BTreeMap<Vec<Point>, Vec<usize>>,
}

impl Complex {
    pub fn new(simplices: Vec<Simplex>) -> Result<Self> {
        if let Some(first) = simplices.first() {
            if simplices.iter().any(|s| s.ambient() != first.ambient()) {
                return Err(SimplicialError::DimensionMismatch);
            }
        }
        let keys: Vec<Vec<Point>> = simplices.iter().map(Simplex::key).collect();
        for i in 0..simplices.len() {
            for j in 0..i {
                if keys[i] == keys[j] {
                    return Err(SimplicialError::DuplicateSimplex(j, i));
                }
                if !meet_in_common_face(&simplices[j], &simplices[i]) {
                    return Err(SimplicialError::BadIntersection(j, i));
                }
            }
        }
        let mut facet_index: BTreeMap<Vec<Point>, Vec<usize>> = BTreeMap::new();
        for (i, s) in simplices.iter().enumerate() {
            if s.dim() > 0 {
                for f in s.facets() {
                    facet_index.entry(f.key()).or_default().push(i);
                }
            }
        }
        Ok(Complex { simplices, facet_index })
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn top_dim(&self) -> Option<usize> {
        self.simplices.iter().map(Simplex::dim).max()
    }

    /// Top-dimensional simplices sharing a facet with simplex `i`, ascending.
    pub fn facet_neighbors(&self, i: usize) -> Vec<usize> {
        let d = self.simplices[i].dim();
        let mut out = BTreeSet::new();
        if d == 0 {
            return Vec::new();
        }
        for f in self.simplices[i].facets() {
            for &j in &self.facet_index[&f.key()] {
                if j != i && self.simplices[j].dim() == d {
                    out.insert(j);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Breadth-first order of the top-dimensional simplices in which every
    /// simplex after the first shares a facet with an earlier one.
    pub fn order_d_simplices(&self) -> Result<Vec<usize>> {
        let d = self.top_dim().ok_or(SimplicialError::DisconnectedAdjacency)?;
        let top: Vec<usize> = (0..self.simplices.len()).filter(|&i| self.simplices[i].dim() == d).collect();
        let mut seen = BTreeSet::from([top[0]]);
        let mut queue = VecDeque::from([top[0]]);
        let mut order = Vec::with_capacity(top.len());
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for j in self.facet_neighbors(i) {
                if seen.insert(j) {
                    queue.push_back(j);
                }
            }
        }
        if order.len() != top.len() {
            return Err(SimplicialError::DisconnectedAdjacency);
        }
        Ok(order)
    }

    /// Whether `order` lists every top simplex once, each after the first
    /// sharing a facet with an earlier one.
    pub fn is_valid_order(&self, order: &[usize]) -> bool {
        let Some(d) = self.top_dim() else { return order.is_empty() };
        let top: BTreeSet<usize> = (0..self.simplices.len()).filter(|&i| self.simplices[i].dim() == d).collect();
        let listed: BTreeSet<usize> = order.iter().copied().collect();
        if listed != top || listed.len() != order.len() {
            return false;
        }
        (1..order.len()).all(|k| {
            let nb = self.facet_neighbors(order[k]);
            order[..k].iter().any(|j| nb.contains(j))
        })
    }
}

/// An affine map on one cell, given by the images of the cell's vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineCell {
    pub domain: Simplex,
    pub image: Vec<Point>,
}

impl AffineCell {
    fn apply(&self, x: &[Q]) -> Option<Point> {
        let l = self.domain.barycentric(x).ok()?;
        if l.iter().any(Signed::is_negative) {
            return None;
        }
        let mut p = vec![Q::zero(); self.image[0].len()];
        for (v, w) in self.image.iter().zip(&l) {
            for (pi, vi) in p.iter_mut().zip(v) {
                *pi += w * vi;
            }
        }
        Some(p)
    }
}

/// A map that is affine on each cell of a simplicial complex.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseAffineMap {
    cells: Vec<AffineCell>,
}

impl PiecewiseAffineMap {
    /// Checks that the cells form a complex and that cell maps agree on
    /// shared faces, which for affine maps means on shared vertices.
    pub fn new(cells: Vec<AffineCell>) -> Result<Self> {
        Complex::new(cells.iter().map(|c| c.domain.clone()).collect())?;
        for i in 0..cells.len() {
            for j in 0..i {
                for (vi, wi) in cells[i].domain.vertices.iter().zip(&cells[i].image) {
                    if let Some(k) = cells[j].domain.vertices.iter().position(|v| v == vi) {
                        if cells[j].image[k] != *wi {
                            return Err(SimplicialError::InconsistentMap(j, i));
                        }
                    }
                }
            }
        }
        Ok(PiecewiseAffineMap { cells })
    }

    pub fn cells(&self) -> &[AffineCell] {
        &self.cells
    }

    pub fn eval(&self, x: &[Q]) -> Result<Point> {
        self.cells.iter().find_map(|c| c.apply(x)).ok_or(SimplicialError::NotInDomain)
    }

    /// Swaps domains and images; fails unless the images form a complex.
    pub fn inverse(&self) -> Result<Self> {
        let cells = self
            .cells
            .iter()
            .map(|c| {
                let domain = Simplex::new(c.image.clone())
                    .map_err(|_| SimplicialError::DegenerateConfiguration("collapsed cell".into()))?;
                Ok(AffineCell { domain, image: c.domain.vertices.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(cells)
    }
}

/// The Nash diffeomorphism from the interior of a full-dimensional simplex
/// onto `R^n`: affine normalization to the standard simplex, then
/// `x -> x/(1 - Σx)` onto the open orthant, then `t -> t - 1/t` per axis.
#[derive(Clone, Debug, PartialEq)]
pub struct InteriorChart {
    pub forward: NashMap,
    pub inverse: NashMap,
}

pub fn interior_to_space(s: &Simplex) -> Result<InteriorChart> {
    let n = s.dim();
    if n != s.ambient() || n == 0 {
        return Err(SimplicialError::DegenerateSimplex);
    }
    let v0 = &s.vertices[0];
    // Columns v_i - v_0.
    let g: Vec<Vec<Q>> = (0..n).map(|r| (1..=n).map(|i| &s.vertices[i][r] - &v0[r]).collect()).collect();
    let mut ginv = vec![vec![Q::zero(); n]; n];
    for r in 0..n {
        let mut e = vec![Q::zero(); n];
        e[r] = Q::one();
        let col = solve_q(&g, &e).ok_or(SimplicialError::DegenerateSimplex)?;
        for i in 0..n {
            ginv[i][r] = col[i].clone();
        }
    }
    let (lo, hi) = s.bbox();
    let domain = DomainBox::new(
        lo.iter().zip(&hi).map(|(a, b)| (a.to_f64().unwrap_or(f64::NAN), b.to_f64().unwrap_or(f64::NAN))).collect(),
    );
    let std_coords: Vec<NashExpr> = (0..n)
        .map(|i| {
            let mut p = Polynomial::zero(n);
            for r in 0..n {
                let shifted = &Polynomial::var(n, r) - &Polynomial::constant(n, v0[r].clone());
                p = &p + &shifted.scale(&ginv[i][r]);
            }
            p.to_expr(domain.clone())
        })
        .collect();
    let one = || NashExpr::constant(n, Q::one());
    let rest = std_coords.iter().cloned().fold(one(), |acc, x| acc - x);
    let forward = std_coords
        .into_iter()
        .map(|x| {
            let y = x / rest.clone();
            y.clone() - one() / y
        })
        .collect();

    let lifted: Vec<NashExpr> = (0..n)
        .map(|i| {
            let t = NashExpr::var(n, i);
            let root = (t.clone() * t.clone() + NashExpr::constant(n, q(4, 1))).sqrt();
            (t + root).scale(q(1, 2))
        })
        .collect();
    let total = lifted.iter().cloned().fold(one(), |acc, x| acc + x);
    let inverse = (0..n)
        .map(|r| {
            let mut acc = NashExpr::constant(n, v0[r].clone());
            for (i, s_i) in lifted.iter().enumerate() {
                acc = acc + (s_i.clone() / total.clone()).scale(g[r][i].clone());
            }
            acc
        })
        .collect();
    Ok(InteriorChart { forward: NashMap::new(n, forward), inverse: NashMap::new(n, inverse) })
}

/// The simplices `η_i = conv(τ_i ∪ {b})`, where `τ_i` is the facet opposite
/// vertex `i` for each selected `i` and `b` is the barycenter of the face
/// spanned by the selected vertices.
pub fn subdivide(s: &Simplex, facets: &[usize]) -> Result<Vec<Simplex>> {
    let k = facets.len();
    let distinct: BTreeSet<usize> = facets.iter().copied().collect();
    if k == 0 || k > s.vertices.len() || distinct.len() != k || facets.iter().any(|&i| i >= s.vertices.len()) {
        return Err(SimplicialError::InvalidFacetSelection(facets.to_vec()));
    }
    let eps = Simplex { vertices: facets.iter().map(|&i| s.vertices[i].clone()).collect() };
    let b = eps.barycenter();
    Ok(facets
        .iter()
        .map(|&i| {
            let mut vertices = s.vertices.clone();
            vertices[i] = b.clone();
            Simplex { vertices }
        })
        .collect())
}

/// Exact triangulation check: positive volumes summing to `vol(s)`, and
/// pairwise intersections along common faces.
pub fn check_subdivision(s: &Simplex, parts: &[Simplex]) -> Result<()> {
    let expected = s.volume()?;
    let mut found = Q::zero();
    for p in parts {
        let v = p.volume()?;
        if !v.is_positive() {
            return Err(SimplicialError::DegenerateSimplex);
        }
        found += v;
    }
    if found != expected {
        return Err(SimplicialError::VolumeMismatch { expected: Box::new(expected), found: Box::new(found) });
    }
    Complex::new(parts.to_vec())?;
    Ok(())
}

/// Two `n`-simplices glued along a facet `τ`, with a piecewise affine
/// homeomorphism `ψ: σ2 -> σ1 ∪ σ2` that fixes `∂σ2 \ τ°` and carries
/// `σ2 \ τ` onto `σ1° ∪ (σ2 \ ∂τ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErasedPair {
    pub sigma1: Simplex,
    pub sigma2: Simplex,
    pub tau: Simplex,
    pub psi: PiecewiseAffineMap,
    pub inverse: PiecewiseAffineMap,
}

pub fn erase_homeo(sigma1: &Simplex, sigma2: &Simplex) -> Result<ErasedPair> {
    let n = sigma1.dim();
    if n == 0 || sigma1.ambient() != n || sigma2.ambient() != n || sigma2.dim() != n {
        return Err(SimplicialError::DegenerateConfiguration("need two full-dimensional simplices".into()));
    }
    let shared: Vec<Point> = sigma2.vertices.iter().filter(|v| sigma1.vertices.contains(v)).cloned().collect();
    if shared.len() != n {
        return Err(SimplicialError::NotFacetAdjacent);
    }
    let v1 = sigma1.vertices.iter().find(|v| !shared.contains(v)).expect("one free vertex").clone();
    let v2 = sigma2.vertices.iter().find(|v| !shared.contains(v)).expect("one free vertex").clone();
    let tau = Simplex { vertices: shared };
    let b = tau.barycenter();

    // Frame x -> b + F x: τ spans {x_n = 0}, b is the origin, v1 is -e_n.
    let mut cols: Vec<Point> = (1..n).map(|k| sub(&tau.vertices[k], &tau.vertices[0])).collect();
    cols.push(sub(&b, &v1));
    let f: Vec<Vec<Q>> = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let to_model = |x: &[Q]| solve_q(&f, &sub(x, &b));
    let degenerate = || SimplicialError::DegenerateConfiguration("singular frame".into());
    let apex = to_model(&v2).ok_or_else(degenerate)?;
    if !apex[n - 1].is_positive() {
        return Err(SimplicialError::NotFacetAdjacent);
    }
    // Undo the shear sending the apex to e_n, then leave the frame.
    let back = |y: &Point| -> Point {
        let mut z = y.clone();
        if y[n - 1].is_positive() {
            for (i, zi) in z.iter_mut().enumerate() {
                let shift = if i == n - 1 { &apex[i] - Q::one() } else { apex[i].clone() };
                *zi += &y[n - 1] * shift;
            }
        }
        (0..n).map(|r| (0..n).fold(b[r].clone(), |acc, k| acc + &f[r][k] * &z[k])).collect()
    };
    let axis = |t: Q| -> Point {
        let mut p = vec![Q::zero(); n];
        p[n - 1] = t;
        p
    };
    let origin = axis(Q::zero());
    let top = axis(Q::one());
    let bottom = axis(-Q::one());
    let w0 = axis(Q::new(1.into(), ((n + 1) as i64).into()));
    let c = axis(Q::new(1.into(), ((n + 2) as i64).into()));
    let wm: Vec<Point> = tau.vertices.iter().map(|v| to_model(v).ok_or_else(degenerate)).collect::<Result<_>>()?;

    let mut cells = Vec::with_capacity(3 * n);
    for i in 0..n {
        let others: Vec<Point> = (0..n).filter(|&j| j != i).map(|j| wm[j].clone()).collect();
        let with = |a: &Point, b: &Point| -> Vec<Point> {
            let mut v = vec![back(a), back(b)];
            v.extend(others.iter().map(&back));
            v
        };
        let upper = with(&top, &w0);
        cells.push((upper.clone(), upper));
        cells.push((with(&c, &w0), with(&origin, &w0)));
        cells.push((with(&origin, &c), with(&bottom, &origin)));
    }
    let cells = cells
        .into_iter()
        .map(|(dom, image)| {
            let domain = Simplex::new(dom).map_err(|_| degenerate())?;
            Ok(AffineCell { domain, image })
        })
        .collect::<Result<Vec<_>>>()?;
    let psi = PiecewiseAffineMap::new(cells)?;
    let inverse = psi.inverse()?;
    Ok(ErasedPair { sigma1: sigma1.clone(), sigma2: sigma2.clone(), tau, psi, inverse })
}

impl ErasedPair {
    /// Membership in `D = σ1° ∪ (σ2 \ ∂τ)`.
    pub fn in_d(&self, y: &[Q]) -> bool {
        self.sigma1.contains_interior(y) || (self.sigma2.contains(y) && !self.tau.boundary_contains(y))
    }

    pub fn in_union(&self, y: &[Q]) -> bool {
        self.sigma1.contains(y) || self.sigma2.contains(y)
    }

    /// Exact checks on seeded rational points: `ψ` lands in `σ1 ∪ σ2`,
    /// `ψ(x) ∈ D` iff `x ∉ τ`, `ψ` fixes `∂σ2 \ τ°`, and `ψ` and its inverse
    /// compose to the identity in both orders.
    pub fn verify(&self, samples: usize, seed: u64) -> Outcome {
        let mut out = Outcome::new(0.0);
        let mut rng = SplitMix64::new(seed);
        let free = self.sigma2.vertices.iter().position(|v| !self.tau.vertices.contains(v)).expect("apex");
        for _ in 0..samples {
            let x = self.sigma2.sample_rational(&mut rng, 12);
            let Ok(y) = self.psi.eval(&x) else {
                out.fail(format!("psi undefined at {x:?}"));
                continue;
            };
            let l = self.sigma2.barycentric(&x).expect("sampled in sigma2");
            let on_tau = l[free].is_zero();
            let outer = (0..l.len()).any(|i| i != free && l[i].is_zero());
            let mut ok = self.in_union(&y) && self.in_d(&y) != on_tau;
            if outer {
                ok &= y == x;
            }
            ok &= self.inverse.eval(&y).is_ok_and(|back| back == x);
            let z = if rng.coin() { self.sigma1.sample_rational(&mut rng, 12) } else { self.sigma2.sample_rational(&mut rng, 12) };
            ok &= self.inverse.eval(&z).and_then(|w| self.psi.eval(&w)).is_ok_and(|back| back == z);
            if ok {
                out.record(0.0);
            } else {
                out.fail(format!("exact check failed at x = {x:?}, z = {z:?}"));
            }
        }
        out
    }
}

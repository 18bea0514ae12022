//! Explicit one-dimensional Nash maps and piecewise-polynomial C² maps, with
//! exact knot checks and sampled image verification.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::{ToPrimitive, Zero};

use crate::expr::{DomainBox, ExprError, NashExpr, NashMap, Polynomial};
use crate::rng::SplitMix64;
use crate::roots::solve_monotone;
use crate::{q, Q};

pub const NAMES: [&str; 10] = [
    "open01",
    "open01_inv",
    "halfopen01",
    "closed01",
    "circle",
    "orthant1d",
    "orthant1d_inv",
    "c2_f1",
    "c2_f2",
    "c2_f3",
];

/// Grid size of the surjectivity probe.
pub const IMAGE_GRID: usize = 1000;
/// Largest residual accepted for a bisected preimage.
pub const IMAGE_TOL: f64 = 1e-8;
/// Grid size of the monotonicity check.
pub const MONOTONE_GRID: usize = 10_000;
/// Stand-in for an infinite endpoint when an image grid must be finite.
const FAR: f64 = 10.0;
/// Distance kept from an open image endpoint on the probe grid.
const OPEN_MARGIN: f64 = 1e-3;
/// Forward samples of an unbounded domain are drawn from `[-SPREAD, SPREAD]`.
const SPREAD: f64 = 100.0;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown map name {0:?}")]
    UnknownName(String),
    #[error("no preimage bracket found for grid point {target}")]
    SurjectivityProbeFailed { target: f64 },
    #[error("map is not piecewise")]
    NotPiecewise,
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Interval with independently open or closed, possibly infinite, ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval1 {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval1 {
    pub const fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Self {
        Interval1 { lo, hi, lo_closed, hi_closed }
    }

    pub const fn line() -> Self {
        Self::new(f64::NEG_INFINITY, f64::INFINITY, false, false)
    }

    pub fn contains(&self, t: f64) -> bool {
        let lo_ok = if self.lo_closed { t >= self.lo } else { t > self.lo };
        let hi_ok = if self.hi_closed { t <= self.hi } else { t < self.hi };
        lo_ok && hi_ok
    }

    fn closure_box(&self) -> DomainBox {
        DomainBox::new(vec![(self.lo, self.hi)])
    }

    /// Evenly spaced probe grid: closed finite ends are included, open ends
    /// are pulled in by `OPEN_MARGIN`, infinite ends replaced by `±FAR`.
    pub fn probe_grid(&self, n: usize) -> Vec<f64> {
        let a = if !self.lo.is_finite() {
            -FAR
        } else if self.lo_closed {
            self.lo
        } else {
            self.lo + OPEN_MARGIN
        };
        let b = if !self.hi.is_finite() {
            FAR.max(a + FAR)
        } else if self.hi_closed {
            self.hi
        } else {
            self.hi - OPEN_MARGIN
        };
        (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ImageSet {
    Interval(Interval1),
    UnitCircle,
}

/// A polynomial piece valid on the closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub lo: Q,
    pub hi: Q,
    pub poly: Polynomial,
}

/// Contiguous polynomial pieces; the knots are the interior endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Piecewise {
    pieces: Vec<Piece>,
}

impl Piecewise {
    pub fn new(pieces: Vec<Piece>) -> Self {
        assert!(!pieces.is_empty());
        for w in pieces.windows(2) {
            assert_eq!(w[0].hi, w[1].lo, "pieces must be contiguous");
        }
        for p in &pieces {
            assert_eq!(p.poly.arity(), 1);
            assert!(p.lo < p.hi);
        }
        Piecewise { pieces }
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn knots(&self) -> Vec<Q> {
        self.pieces[1..].iter().map(|p| p.lo.clone()).collect()
    }

    fn piece_at_q(&self, t: &Q) -> &Piece {
        self.pieces.iter().find(|p| *t <= p.hi).unwrap_or(self.pieces.last().unwrap())
    }

    /// Exact value; outside the pieces the end polynomials are extended.
    pub fn eval_q(&self, t: &Q) -> Q {
        self.piece_at_q(t).poly.eval_q(core::slice::from_ref(t))
    }

    pub fn eval(&self, t: f64) -> f64 {
        let piece = self
            .pieces
            .iter()
            .find(|p| t <= p.hi.to_f64().unwrap())
            .unwrap_or(self.pieces.last().unwrap());
        piece.poly.eval(&[t])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MapBody {
    Smooth(NashMap),
    Piecewise(Piecewise),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedMap {
    pub name: String,
    pub summary: &'static str,
    pub body: MapBody,
    pub domain: Interval1,
    pub image: ImageSet,
    /// Open intervals on which the map is monotone and whose images cover
    /// the declared image.
    pub monotone: Vec<(f64, f64)>,
}

impl NamedMap {
    pub fn eval(&self, t: f64) -> Result<Vec<f64>, ExprError> {
        if !self.domain.contains(t) {
            return Err(ExprError::OutOfDomain);
        }
        self.eval_unchecked(t)
    }

    fn eval_unchecked(&self, t: f64) -> Result<Vec<f64>, ExprError> {
        match &self.body {
            MapBody::Smooth(m) => m.components().iter().map(|c| c.node().eval(&[t])).collect(),
            MapBody::Piecewise(p) => Ok(vec![p.eval(t)]),
        }
    }

    /// Scalar used to locate preimages: the value itself, or the angle in
    /// `[0, 2π)` for circle-valued maps.
    fn probe_scalar(&self, t: f64) -> Option<f64> {
        let v = self.eval_unchecked(t).ok()?;
        Some(match self.image {
            ImageSet::Interval(_) => v[0],
            ImageSet::UnitCircle => {
                let a = libm::atan2(v[1], v[0]);
                if a < 0.0 {
                    a + 2.0 * PI
                } else {
                    a
                }
            }
        })
    }

    pub fn piecewise(&self) -> Option<&Piecewise> {
        match &self.body {
            MapBody::Piecewise(p) => Some(p),
            MapBody::Smooth(_) => None,
        }
    }
}

fn t() -> NashExpr {
    NashExpr::var(1, 0)
}

fn k(n: i64, d: i64) -> NashExpr {
    NashExpr::constant(1, q(n, d))
}

fn poly(coeffs: &[(u32, Q)]) -> Polynomial {
    Polynomial::from_terms(1, coeffs.iter().map(|(e, c)| (vec![*e], c.clone())))
}

fn piece(lo: Q, hi: Q, p: Polynomial) -> Piece {
    Piece { lo, hi, poly: p }
}

fn smooth(
    name: &str,
    summary: &'static str,
    comps: Vec<NashExpr>,
    domain: Interval1,
    image: ImageSet,
    monotone: Vec<(f64, f64)>,
) -> NamedMap {
    let comps = comps.into_iter().map(|c| c.with_domain(domain.closure_box())).collect();
    NamedMap {
        name: name.into(),
        summary,
        body: MapBody::Smooth(NashMap::new(1, comps)),
        domain,
        image,
        monotone,
    }
}

fn piecewise(
    name: &str,
    summary: &'static str,
    pieces: Vec<Piece>,
    domain: Interval1,
    image: Interval1,
) -> NamedMap {
    let monotone = vec![(domain.lo, domain.hi)];
    NamedMap {
        name: name.into(),
        summary,
        body: MapBody::Piecewise(Piecewise::new(pieces)),
        domain,
        image: ImageSet::Interval(image),
        monotone,
    }
}

pub fn make(name: &str) -> Result<NamedMap, CatalogError> {
    let inf = f64::INFINITY;
    let line = Interval1::line();
    Ok(match name {
        "open01" => smooth(
            name,
            "t/(2 sqrt(1+t^2)) + 1/2 : R -> (0,1)",
            vec![t() / (k(2, 1) * (k(1, 1) + t() * t()).sqrt()) + k(1, 2)],
            line,
            ImageSet::Interval(Interval1::new(0.0, 1.0, false, false)),
            vec![(-inf, inf)],
        ),
        "open01_inv" => smooth(
            name,
            "(2t-1)/(2 sqrt(t(1-t))) : (0,1) -> R",
            vec![(k(2, 1) * t() - k(1, 1)) / (k(2, 1) * (t() * (k(1, 1) - t())).sqrt())],
            Interval1::new(0.0, 1.0, false, false),
            ImageSet::Interval(line),
            vec![(0.0, 1.0)],
        ),
        "halfopen01" => smooth(
            name,
            "t^2/(t^2+1) : R -> [0,1)",
            vec![t() * t() / (t() * t() + k(1, 1))],
            line,
            ImageSet::Interval(Interval1::new(0.0, 1.0, true, false)),
            vec![(0.0, inf), (-inf, 0.0)],
        ),
        "closed01" => smooth(
            name,
            "t/(t^2+1) + 1/2 : R -> [0,1]",
            vec![t() / (t() * t() + k(1, 1)) + k(1, 2)],
            line,
            ImageSet::Interval(Interval1::new(0.0, 1.0, true, true)),
            vec![(-1.0, 1.0)],
        ),
        "circle" => {
            let den = k(1, 1) + t() * t();
            let sx = (k(1, 1) - t() * t()) / den.clone();
            let sy = k(2, 1) * t() / den;
            let stereo = NashMap::new(1, vec![sx, sy]);
            let (x, y) = (NashExpr::var(2, 0), NashExpr::var(2, 1));
            let square = NashMap::new(2, vec![x.clone() * x.clone() - y.clone() * y.clone(), k2(2) * x * y]);
            let comp = square.compose(&stereo)?;
            smooth(
                name,
                "z^2 after inverse stereographic projection : R -> S^1",
                comp.components().to_vec(),
                line,
                ImageSet::UnitCircle,
                vec![(0.0, inf)],
            )
        }
        "orthant1d" => smooth(
            name,
            "t - 1/t : (0,inf) -> R",
            vec![t() - k(1, 1) / t()],
            Interval1::new(0.0, inf, false, false),
            ImageSet::Interval(line),
            vec![(0.0, inf)],
        ),
        "orthant1d_inv" => smooth(
            name,
            "(t + sqrt(t^2+4))/2 : R -> (0,inf)",
            vec![(t() + (t() * t() + k(4, 1)).sqrt()) / k(2, 1)],
            line,
            ImageSet::Interval(Interval1::new(0.0, inf, false, false)),
            vec![(-inf, inf)],
        ),
        "c2_f1" => piecewise(
            name,
            "C^2 piecewise quartic : [1/4,1) -> [0,1), identity on [3/4,1)",
            f1_pieces(),
            Interval1::new(0.25, 1.0, true, false),
            Interval1::new(0.0, 1.0, true, false),
        ),
        "c2_f2" => piecewise(
            name,
            "C^2 piecewise quartic : [1/2,1) -> [0,1), identity on [3/4,1)",
            f2_pieces(),
            Interval1::new(0.5, 1.0, true, false),
            Interval1::new(0.0, 1.0, true, false),
        ),
        "c2_f3" => piecewise(
            name,
            "C^2 piecewise quartic : (-1,1) -> (-1,0), identity on (-1,-1/2]",
            f3_pieces(),
            Interval1::new(-1.0, 1.0, false, false),
            Interval1::new(-1.0, 0.0, false, false),
        ),
        _ => return Err(CatalogError::UnknownName(name.into())),
    })
}

fn k2(n: i64) -> NashExpr {
    NashExpr::constant(2, q(n, 1))
}

fn f1_pieces() -> Vec<Piece> {
    vec![
        // 5/12 (4x - 1)
        piece(q(1, 4), q(1, 2), poly(&[(1, q(5, 3)), (0, q(-5, 12))])),
        // (64x^4 - 160x^3 + 144x^2)/3 - 17x + 9/4
        piece(
            q(1, 2),
            q(3, 4),
            poly(&[
                (4, q(64, 3)),
                (3, q(-160, 3)),
                (2, q(48, 1)),
                (1, q(-17, 1)),
                (0, q(9, 4)),
            ]),
        ),
        piece(q(3, 4), q(1, 1), poly(&[(1, q(1, 1))])),
    ]
}

fn f2_pieces() -> Vec<Piece> {
    vec![
        // 11/6 (2x - 1)
        piece(q(1, 2), q(5, 8), poly(&[(1, q(11, 3)), (0, q(-11, 6))])),
        // 2048 (x^4/3 - 11x^3/12 + 15x^2/16) - 863x + 144
        piece(
            q(5, 8),
            q(3, 4),
            poly(&[
                (4, q(2048, 3)),
                (3, q(-5632, 3)),
                (2, q(1920, 1)),
                (1, q(-863, 1)),
                (0, q(144, 1)),
            ]),
        ),
        piece(q(3, 4), q(1, 1), poly(&[(1, q(1, 1))])),
    ]
}

fn f3_pieces() -> Vec<Piece> {
    vec![
        piece(q(-1, 1), q(-1, 2), poly(&[(1, q(1, 1))])),
        // (16x^4 + 16x^3 + x - 1)/5
        piece(
            q(-1, 2),
            q(0, 1),
            poly(&[(4, q(16, 5)), (3, q(16, 5)), (1, q(1, 5)), (0, q(-1, 5))]),
        ),
        // (x - 1)/5
        piece(q(0, 1), q(1, 1), poly(&[(1, q(1, 5)), (0, q(-1, 5))])),
    ]
}

/// Inverse of `c2_f3` on `(-1, 0)`, by bisection.
pub fn f3_inverse(y: f64) -> f64 {
    let f3 = match make("c2_f3").map(|m| m.body) {
        Ok(MapBody::Piecewise(p)) => p,
        _ => unreachable!(),
    };
    if y <= -0.5 {
        return y;
    }
    if y >= -0.2 {
        return 5.0 * y + 1.0;
    }
    crate::roots::bisect(|x| Some(f3.eval(x)), -0.5, 0.0, y)
}

/// Mismatch of one derivative order at one knot, as an exact rational.
#[derive(Clone, Debug, PartialEq)]
pub struct KnotCheck {
    pub knot: Q,
    pub jumps: [Q; 3],
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct C2Report {
    pub knots: Vec<KnotCheck>,
    pub monotone: bool,
    pub grid: usize,
    pub max_error: f64,
    pub failures: Vec<String>,
}

impl C2Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks C⁰, C¹ and C² matching at every knot with exact rational
/// arithmetic, and strict monotonicity on a grid of the domain.
pub fn verify_c2(map: &NamedMap, tol: f64) -> Result<C2Report, CatalogError> {
    let pw = map.piecewise().ok_or(CatalogError::NotPiecewise)?;
    let tol_q = Q::from_float(tol).unwrap_or_else(Q::zero);
    let mut failures = Vec::new();
    let mut knots = Vec::new();
    let mut max_error = 0.0f64;
    for w in pw.pieces.windows(2) {
        let x = core::slice::from_ref(&w[0].hi);
        let (mut l, mut r) = (w[0].poly.clone(), w[1].poly.clone());
        let mut jumps: [Q; 3] = Default::default();
        for (order, jump) in jumps.iter_mut().enumerate() {
            *jump = r.eval_q(x) - l.eval_q(x);
            max_error = max_error.max(libm::fabs(jump.to_f64().unwrap_or(f64::INFINITY)));
            if num_traits::Signed::abs(&*jump) > tol_q {
                failures.push(format!("C{} mismatch at knot {}: jump {}", order, w[0].hi, jump));
            }
            l = l.partial(0);
            r = r.partial(0);
        }
        let ok = jumps.iter().all(|j| num_traits::Signed::abs(j) <= tol_q);
        knots.push(KnotCheck { knot: w[0].hi.clone(), jumps, ok });
    }

    let lo = pw.pieces[0].lo.clone();
    let hi = pw.pieces.last().unwrap().hi.clone();
    let step = (&hi - &lo) / Q::from_integer((MONOTONE_GRID as i64).into());
    let start = if map.domain.lo_closed { 0 } else { 1 };
    let mut prev: Option<Q> = None;
    let mut monotone = true;
    for i in start..MONOTONE_GRID {
        let x = &lo + &step * Q::from_integer((i as i64).into());
        let v = pw.eval_q(&x);
        if let Some(p) = &prev {
            if v <= *p {
                monotone = false;
                failures.push(format!("not increasing at {x}"));
                break;
            }
        }
        prev = Some(v);
    }
    Ok(C2Report { knots, monotone, grid: MONOTONE_GRID - start, max_error, failures })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImageReport {
    pub samples: usize,
    pub forward_violations: usize,
    pub grid: usize,
    pub max_residual: f64,
    /// Largest sampled value, recorded for half-open images.
    pub sup: Option<f64>,
    pub failures: Vec<String>,
}

impl ImageReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.max_residual < IMAGE_TOL
    }
}

fn sample_domain(d: &Interval1, rng: &mut SplitMix64) -> f64 {
    let lo = if d.lo.is_finite() { d.lo } else { -SPREAD };
    let hi = if d.hi.is_finite() { d.hi } else { lo.max(0.0) + SPREAD };
    loop {
        let x = rng.uniform(lo, hi);
        if d.contains(x) {
            return x;
        }
    }
}

fn image_contains(image: &ImageSet, v: &[f64]) -> bool {
    match image {
        ImageSet::Interval(i) => i.contains(v[0]),
        ImageSet::UnitCircle => libm::fabs(libm::hypot(v[0], v[1]) - 1.0) < 1e-12,
    }
}

/// Forward containment on seeded samples plus a bisection-based
/// surjectivity probe on a grid of the declared image.
pub fn verify_image(map: &NamedMap, samples: usize, seed: u64) -> Result<ImageReport, CatalogError> {
    let mut rng = SplitMix64::new(seed);
    let mut failures = Vec::new();
    let mut forward_violations = 0;
    let mut sup = f64::NEG_INFINITY;
    for _ in 0..samples {
        let x = sample_domain(&map.domain, &mut rng);
        let v = map.eval(x)?;
        sup = sup.max(v[0]);
        if !image_contains(&map.image, &v) {
            forward_violations += 1;
            if forward_violations == 1 {
                failures.push(format!("value {:?} at t = {x} outside the image", v));
            }
        }
    }

    let targets: Vec<(f64, Vec<f64>)> = match &map.image {
        ImageSet::Interval(i) => i.probe_grid(IMAGE_GRID).into_iter().map(|y| (y, vec![y])).collect(),
        ImageSet::UnitCircle => (0..IMAGE_GRID)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / IMAGE_GRID as f64;
                (a, vec![libm::cos(a), libm::sin(a)])
            })
            .collect(),
    };
    let mut max_residual = 0.0f64;
    for (scalar, point) in &targets {
        let found = map.monotone.iter().find_map(|&(lo, hi)| {
            let t = solve_monotone(|s| map.probe_scalar(s), lo, hi, *scalar)?;
            let v = map.eval_unchecked(t).ok()?;
            let r = crate::linalg::dist(&v, point);
            (r < IMAGE_TOL).then_some(r)
        });
        match found {
            Some(r) => max_residual = max_residual.max(r),
            None => return Err(CatalogError::SurjectivityProbeFailed { target: *scalar }),
        }
    }

    let half_open_sup = match &map.image {
        ImageSet::Interval(i) if i.hi.is_finite() && !i.hi_closed => {
            if sup >= i.hi {
                failures.push(format!("supremum {sup} reaches the open end {}", i.hi));
            }
            Some(sup)
        }
        _ => None,
    };
    Ok(ImageReport {
        samples,
        forward_violations,
        grid: targets.len(),
        max_residual,
        sup: half_open_sup,
        failures,
    })
}

//! Bounded models `H = {h >= 0}` with explicit collars, their Nash doubles
//! `D(H) = {t^2 = h(x)}`, and a surjection from the interior of `H` onto `H`
//! that folds a collar of the boundary onto itself.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::catalog::f3_inverse;
use crate::expr::{DomainBox, ExprError, NashExpr, NashMap};
use crate::linalg::{dist, dot, norm};
use crate::report::Outcome;
use crate::rng::SplitMix64;
use crate::roots::bisect;
use crate::q;

/// Band around `h = 0` treated as the boundary.
pub const BOUNDARY_EPS: f64 = 1e-9;
/// Points with `|h| < NEAR_BOUNDARY` take part in the rank check.
pub const NEAR_BOUNDARY: f64 = 1e-6;
/// Minimum gradient norm of `h` near the boundary.
pub const MIN_GRADIENT: f64 = 1e-3;
/// Collar level where the fold stops: `f3` sends `-1/5` to `0`.
pub const FOLD_LEVEL: f64 = 1.0 / 25.0;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DoubleError {
    #[error("gradient of h has norm {grad_norm} at near-boundary point {point:?}")]
    BoundaryRankViolation { point: Vec<f64>, grad_norm: f64 },
    #[error("point is outside H: h = {h}")]
    OutsideH { h: f64 },
    #[error("no explicit chart or collar for this model")]
    UnsupportedModel,
    #[error("point is not on the boundary: h = {h}")]
    NotOnBoundary { h: f64 },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// `[0, inf)` with `h = x1`.
    Interval,
    /// `{x1 >= 0}` in `R^d` with `h = x1`.
    HalfSpace,
    /// Closed unit disk with `h = 1 - x1^2 - x2^2`.
    Disk,
    /// User-supplied `h` without collar data.
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundedModel {
    pub kind: ModelKind,
    pub dim: usize,
    pub h: NashExpr,
    pub chart_box: DomainBox,
    pub retraction: Option<NashMap>,
}

impl BoundedModel {
    pub fn interval() -> Self {
        let h = NashExpr::var(1, 0);
        let rho = NashMap::new(1, vec![NashExpr::constant(1, q(0, 1))]);
        BoundedModel {
            kind: ModelKind::Interval,
            dim: 1,
            h,
            chart_box: DomainBox::new(vec![(-1.0, 10.0)]),
            retraction: Some(rho),
        }
    }

    pub fn half_space(dim: usize) -> Self {
        assert!(dim >= 1);
        let h = NashExpr::var(dim, 0);
        let mut comps = vec![NashExpr::constant(dim, q(0, 1))];
        comps.extend((1..dim).map(|i| NashExpr::var(dim, i)));
        BoundedModel {
            kind: ModelKind::HalfSpace,
            dim,
            h,
            chart_box: DomainBox::cube(dim, -2.0, 2.0),
            retraction: Some(NashMap::new(dim, comps)),
        }
    }

    pub fn disk() -> Self {
        let (x, y) = (NashExpr::var(2, 0), NashExpr::var(2, 1));
        let r2 = x.clone() * x.clone() + y.clone() * y.clone();
        let h = NashExpr::constant(2, q(1, 1)) - r2.clone();
        let r = r2.sqrt();
        let rho = NashMap::new(2, vec![x / r.clone(), y / r]);
        BoundedModel {
            kind: ModelKind::Disk,
            dim: 2,
            h,
            chart_box: DomainBox::cube(2, -1.5, 1.5),
            retraction: Some(rho),
        }
    }

    pub fn custom(h: NashExpr, chart_box: DomainBox) -> Self {
        BoundedModel { kind: ModelKind::Custom, dim: h.arity(), h, chart_box, retraction: None }
    }

    pub fn h_at(&self, x: &[f64]) -> Result<f64, ExprError> {
        self.h.node().eval(x)
    }

    fn grad_at(&self, x: &[f64]) -> Result<Vec<f64>, ExprError> {
        self.h.gradient().iter().map(|g| g.node().eval(x)).collect()
    }

    /// Newton steps along the gradient towards `h = 0`.
    fn project_to_boundary(&self, mut x: Vec<f64>) -> Result<Vec<f64>, ExprError> {
        for _ in 0..200 {
            let hv = self.h_at(&x)?;
            if hv.abs() < 1e-15 {
                break;
            }
            let g = self.grad_at(&x)?;
            let gg = dot(&g, &g);
            if gg < 1e-300 {
                break;
            }
            for (xi, gi) in x.iter_mut().zip(&g) {
                *xi -= hv * gi / gg;
            }
        }
        Ok(x)
    }

    /// Gradient check on near-boundary points obtained by projecting
    /// `samples` seeded points of the chart box onto `h = 0`.
    pub fn check_boundary_rank(&self, samples: usize, seed: u64) -> Result<usize, DoubleError> {
        let mut rng = SplitMix64::new(seed);
        let mut checked = 0;
        for _ in 0..samples {
            let x = self.project_to_boundary(self.chart_box.sample(&mut rng))?;
            let Ok(hv) = self.h_at(&x) else { continue };
            if hv.abs() >= NEAR_BOUNDARY || !self.chart_box.contains(&x) {
                continue;
            }
            checked += 1;
            let g = norm(&self.grad_at(&x)?);
            if g.is_nan() || g <= MIN_GRADIENT {
                return Err(DoubleError::BoundaryRankViolation { point: x, grad_norm: g });
            }
        }
        Ok(checked)
    }

    /// Point `c(b, s)` of the collar over boundary point `b` at level `h = s`.
    pub fn collar_point(&self, b: &[f64], s: f64) -> Result<Vec<f64>, DoubleError> {
        Ok(match self.kind {
            ModelKind::Interval => vec![s],
            ModelKind::HalfSpace => {
                let mut x = b.to_vec();
                x[0] = s;
                x
            }
            ModelKind::Disk => {
                let k = libm::sqrt((1.0 - s).max(0.0));
                vec![b[0] * k, b[1] * k]
            }
            ModelKind::Custom => return Err(DoubleError::UnsupportedModel),
        })
    }

    pub fn retract(&self, x: &[f64]) -> Result<Vec<f64>, DoubleError> {
        let rho = self.retraction.as_ref().ok_or(DoubleError::UnsupportedModel)?;
        Ok(rho.eval(x)?)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoubleModel {
    pub model: BoundedModel,
    /// `t^2 - h(x)` in the variables `(x, t)`.
    pub equation: NashExpr,
    pub projection: NashMap,
    pub involution: NashMap,
}

/// Number of seeded probes used by `nash_double` for the rank check.
pub const RANK_SAMPLES: usize = 1000;

pub fn nash_double(model: &BoundedModel, seed: u64) -> Result<DoubleModel, DoubleError> {
    model.check_boundary_rank(RANK_SAMPLES, seed)?;
    let d = model.dim;
    let n = d + 1;
    let vars: Vec<NashExpr> = (0..d).map(|i| NashExpr::var(n, i)).collect();
    let t = NashExpr::var(n, d);
    let h_lift = model.h.node().substitute(&vars.iter().map(|v| v.node().clone()).collect::<Vec<_>>());
    let equation = t.clone() * t.clone() - NashExpr::from_node(n, DomainBox::unbounded(n), h_lift);
    let projection = NashMap::new(n, vars.clone());
    let mut inv = vars;
    inv.push(-t);
    Ok(DoubleModel { model: model.clone(), equation, projection, involution: NashMap::new(n, inv) })
}

impl DoubleModel {
    pub fn fiber(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, DoubleError> {
        let hv = self.model.h_at(x)?;
        if hv < -BOUNDARY_EPS {
            return Err(DoubleError::OutsideH { h: hv });
        }
        let with_t = |t: f64| {
            let mut p = x.to_vec();
            p.push(t);
            p
        };
        if hv <= BOUNDARY_EPS {
            return Ok(vec![with_t(0.0)]);
        }
        let t = libm::sqrt(hv);
        Ok(vec![with_t(t), with_t(-t)])
    }

    pub fn project(&self, p: &[f64]) -> Vec<f64> {
        p[..self.model.dim].to_vec()
    }

    pub fn involute(&self, p: &[f64]) -> Vec<f64> {
        let mut out = p.to_vec();
        let last = out.len() - 1;
        out[last] = -out[last];
        out
    }

    /// Builds the chart `u'(x, t) = (t, u_2(x), ...)` at a boundary point and
    /// checks that the projection reads `(y1, ..., yd) -> (y1^2, y2, ..., yd)`
    /// on seeded chart samples.
    pub fn verify_local_square(
        &self,
        boundary_point: &[f64],
        tol: f64,
        samples: usize,
        seed: u64,
    ) -> Result<Outcome, DoubleError> {
        let m = &self.model;
        let hb = m.h_at(boundary_point)?;
        if hb.abs() > BOUNDARY_EPS {
            return Err(DoubleError::NotOnBoundary { h: hb });
        }
        let chart = BoundaryChart::new(m, boundary_point)?;
        let mut rng = SplitMix64::new(seed);
        let mut out = Outcome::new(tol);
        for _ in 0..samples {
            let y: Vec<f64> = (0..m.dim).map(|_| rng.uniform(-0.5, 0.5)).collect();
            let x = chart.phi(y[0] * y[0], &y[1..]);
            let mut zeta = x.clone();
            zeta.push(y[0]);
            let on_double = (y[0] * y[0] - m.h_at(&x)?).abs();
            let read = chart.u(&self.project(&zeta))?;
            let mut expect = y.clone();
            expect[0] = y[0] * y[0];
            let mut back = vec![zeta[m.dim]];
            back.extend(chart.u(&x)?.into_iter().skip(1));
            out.record(on_double.max(dist(&read, &expect)).max(dist(&back, &y)));
        }
        Ok(out)
    }
}

/// Coordinates `u = (h, u_2, ..., u_d)` around a boundary point with
/// explicit inverse `phi(s, y')`.
struct BoundaryChart {
    kind: ModelKind,
    base: Vec<f64>,
    tangent: Vec<f64>,
}

impl BoundaryChart {
    fn new(m: &BoundedModel, b: &[f64]) -> Result<Self, DoubleError> {
        let tangent = match m.kind {
            ModelKind::Disk => vec![-b[1], b[0]],
            ModelKind::Interval | ModelKind::HalfSpace => Vec::new(),
            ModelKind::Custom => return Err(DoubleError::UnsupportedModel),
        };
        Ok(BoundaryChart { kind: m.kind, base: b.to_vec(), tangent })
    }

    fn u(&self, x: &[f64]) -> Result<Vec<f64>, DoubleError> {
        Ok(match self.kind {
            ModelKind::Interval => vec![x[0]],
            ModelKind::HalfSpace => {
                let mut v = vec![x[0]];
                v.extend(x[1..].iter().zip(&self.base[1..]).map(|(a, b)| a - b));
                v
            }
            ModelKind::Disk => vec![1.0 - dot(x, x), dot(x, &self.tangent)],
            ModelKind::Custom => return Err(DoubleError::UnsupportedModel),
        })
    }

    fn phi(&self, s: f64, yp: &[f64]) -> Vec<f64> {
        match self.kind {
            ModelKind::Interval => vec![s],
            ModelKind::HalfSpace => {
                let mut v = vec![s];
                v.extend(yp.iter().zip(&self.base[1..]).map(|(a, b)| a + b));
                v
            }
            ModelKind::Disk => {
                let k = libm::sqrt(1.0 - s - yp[0] * yp[0]);
                vec![yp[0] * self.tangent[0] + k * self.base[0], yp[0] * self.tangent[1] + k * self.base[1]]
            }
            ModelKind::Custom => unreachable!(),
        }
    }
}

/// Surjection `Int(H) -> H`: the identity where `h >= 1`, and inside the
/// collar the point at level `f3^{-1}(-sqrt h)^2` over the same boundary
/// point.
#[derive(Clone, Debug, PartialEq)]
pub struct InteriorOnto {
    pub model: BoundedModel,
}

pub fn interior_onto(model: &BoundedModel) -> Result<InteriorOnto, DoubleError> {
    match model.kind {
        ModelKind::Interval | ModelKind::HalfSpace | ModelKind::Disk => {
            Ok(InteriorOnto { model: model.clone() })
        }
        ModelKind::Custom => Err(DoubleError::UnsupportedModel),
    }
}

impl InteriorOnto {
    /// The intermediate point `(x', t')` of the double; `apply` is its
    /// projection.
    pub fn lift(&self, x: &[f64]) -> Result<Vec<f64>, DoubleError> {
        let m = &self.model;
        let hv = m.h_at(x)?;
        if hv <= 0.0 {
            return Err(DoubleError::OutsideH { h: hv });
        }
        let t = -libm::sqrt(hv);
        if hv >= 1.0 {
            let mut p = x.to_vec();
            p.push(t);
            return Ok(p);
        }
        let t2 = f3_inverse(t);
        let mut p = m.collar_point(&m.retract(x)?, t2 * t2)?;
        p.push(t2);
        Ok(p)
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, DoubleError> {
        let mut p = self.lift(x)?;
        p.pop();
        Ok(p)
    }

    /// A preimage of `y`, searched along the collar segment over `ρ(y)` at
    /// levels `h in [1/25, 1]`, where the map is monotone.
    pub fn preimage(&self, y: &[f64]) -> Result<Vec<f64>, DoubleError> {
        let m = &self.model;
        let hy = m.h_at(y)?;
        if hy < -BOUNDARY_EPS {
            return Err(DoubleError::OutsideH { h: hy });
        }
        if hy >= 1.0 {
            return Ok(y.to_vec());
        }
        let b = m.retract(y)?;
        let level = |s: f64| -> Option<f64> {
            let x = m.collar_point(&b, s).ok()?;
            let fx = self.apply(&x).ok()?;
            m.h_at(&fx).ok()
        };
        let s = bisect(level, FOLD_LEVEL, 1.0, hy.max(0.0));
        m.collar_point(&b, s)
    }

    /// Surjectivity over a grid of `H`: every grid point must be matched
    /// by the image of its computed preimage.
    pub fn verify_onto(&self, grid: &[Vec<f64>], tol: f64) -> Outcome {
        let mut out = Outcome::new(tol);
        for y in grid {
            match self.preimage(y).and_then(|x| {
                let hx = self.model.h_at(&x)?;
                if hx <= 0.0 {
                    return Err(DoubleError::OutsideH { h: hx });
                }
                self.apply(&x)
            }) {
                Ok(fx) => out.record(dist(&fx, y)),
                Err(e) => out.fail(format!("grid point {y:?}: {e}")),
            }
        }
        out
    }
}

/// Standard probe grid of about 1000 points covering `H` in each model.
pub fn onto_grid(kind: ModelKind) -> Vec<Vec<f64>> {
    match kind {
        ModelKind::Interval => (0..1000).map(|k| vec![10.0 * k as f64 / 999.0]).collect(),
        ModelKind::HalfSpace => {
            let mut g = Vec::with_capacity(1000);
            for i in 0..25 {
                for j in 0..40 {
                    g.push(vec![2.0 * i as f64 / 24.0, -2.0 + 4.0 * j as f64 / 39.0]);
                }
            }
            g
        }
        ModelKind::Disk => {
            let mut g = Vec::with_capacity(1000);
            for i in 0..25 {
                let r = i as f64 / 24.0;
                for j in 0..40 {
                    let a = 2.0 * core::f64::consts::PI * j as f64 / 40.0;
                    g.push(vec![r * libm::cos(a), r * libm::sin(a)]);
                }
            }
            g
        }
        ModelKind::Custom => Vec::new(),
    }
}

/// A model-specific description used in reports.
pub fn describe(kind: ModelKind) -> String {
    String::from(match kind {
        ModelKind::Interval => "[0, inf) with h = x1",
        ModelKind::HalfSpace => "half-plane x1 >= 0 with h = x1",
        ModelKind::Disk => "unit disk with h = 1 - x1^2 - x2^2",
        ModelKind::Custom => "custom boundary equation",
    })
}

//! Drilling blow-ups of `R^d` along a center `N`: the chart model `Φ`, its
//! inverse `Ψ₀`, the Gauss map of a generator system, boundary fibers,
//! generator changes, the classical two-to-one comparison, and erasure of
//! the center.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::doubles::{interior_onto, BoundedModel, InteriorOnto, FOLD_LEVEL};
use crate::expr::{ExprError, NashExpr, NashMap, Polynomial};
use crate::linalg::{self, dist, dot, norm};
use crate::quadrature::gauss_legendre;
use crate::report::Outcome;
use crate::rng::SplitMix64;

/// Norms at or below this are treated as zero.
pub const ZERO_NORM: f64 = 1e-12;
/// Smallest singular value required of the coefficient vectors on the center.
pub const MIN_SINGULAR: f64 = 1e-6;
/// Smallest singular value below which `Ψ₀` declares the system singular.
pub const RANK_EPS: f64 = 1e-9;
/// Generators must vanish on sampled center points to this accuracy.
pub const CENTER_EPS: f64 = 1e-9;
/// Number of center points probed when validating a spec.
pub const VALIDATION_SAMPLES: usize = 100;
/// Quadrature nodes used to extract coefficient maps from non-polynomial
/// generators.
const QUADRATURE_NODES: usize = 24;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DrillError {
    #[error("point lies on the center")]
    OnCenter,
    #[error("coefficient combination vanishes")]
    DegenerateCoefficients,
    #[error("coefficient matrix is rank deficient (smallest singular value {sigma})")]
    RankDeficient { sigma: f64 },
    #[error("operation needs a chart-form spec with identity parametrization")]
    UnsupportedSpec,
    #[error("invalid center spec: {0}")]
    InvalidSpec(String),
    #[error("point is not on the center (generator norm {norm})")]
    NotOnCenter { norm: f64 },
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Coefficient maps `ζ_{e+1..d}`.
#[derive(Clone, Debug, PartialEq)]
enum Zeta {
    Maps(Vec<NashMap>),
    /// `ζ_j(y, z) = ∫₀¹ ∂f/∂z_j(y, s z) ds`, with `partials[j][i] = ∂f_i/∂z_j`.
    Integral { partials: Vec<Vec<NashExpr>>, rule: Vec<(f64, f64)> },
}

#[derive(Clone, Debug, PartialEq)]
struct Chart {
    psi: NashMap,
    u: NashMap,
    zeta: Zeta,
}

/// A point `(a, b)` of `M × S^{k-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DrillPoint {
    pub base: Vec<f64>,
    pub dir: Vec<f64>,
}

impl DrillPoint {
    pub fn sigma(&self) -> DrillPoint {
        DrillPoint { base: self.base.clone(), dir: self.dir.iter().map(|v| -v).collect() }
    }
}

/// Chart coordinates `(y, ρ, w)` with `w` on the unit sphere of `R^{d-e}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartTriple {
    pub y: Vec<f64>,
    pub rho: f64,
    pub w: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CenterSpec {
    pub d: usize,
    pub e: usize,
    pub k: usize,
    generators: Option<NashMap>,
    chart: Option<Chart>,
}

impl CenterSpec {
    /// `ψ = id` and `ζ_j` the `j`-th unit vector of `R^{d-e}`.
    pub fn trivial(d: usize, e: usize) -> Result<Self, DrillError> {
        let c = d - e;
        let zeta = (0..c)
            .map(|j| {
                NashMap::new(
                    d,
                    (0..c)
                        .map(|i| NashExpr::constant(d, crate::q((i == j) as i64, 1)))
                        .collect(),
                )
            })
            .collect();
        Self::chart_form(d, e, zeta)
    }

    /// Chart form over `ψ = id`, center `{x_{e+1} = ... = x_d = 0}`.
    pub fn chart_form(d: usize, e: usize, zeta: Vec<NashMap>) -> Result<Self, DrillError> {
        Self::chart_form_with(d, e, NashMap::identity(d), NashMap::identity(d), zeta)
    }

    /// Chart form with parametrization `psi: R^d -> M` and its inverse `u`.
    pub fn chart_form_with(
        d: usize,
        e: usize,
        psi: NashMap,
        u: NashMap,
        zeta: Vec<NashMap>,
    ) -> Result<Self, DrillError> {
        if e >= d || zeta.len() != d - e {
            return Err(DrillError::InvalidSpec(format!(
                "need e < d and d - e = {} coefficient maps, got {}",
                d.saturating_sub(e),
                zeta.len()
            )));
        }
        let k = zeta[0].target_dim();
        if zeta.iter().any(|z| z.source_dim() != d || z.target_dim() != k) {
            return Err(DrillError::InvalidSpec("coefficient maps must be R^d -> R^k".into()));
        }
        if u.source_dim() != psi.target_dim() || u.target_dim() != d || psi.source_dim() != d {
            return Err(DrillError::InvalidSpec("psi and u must be mutually inverse charts".into()));
        }
        let spec = CenterSpec { d, e, k, generators: None, chart: Some(Chart { psi, u, zeta: Zeta::Maps(zeta) }) };
        spec.validate(0)?;
        Ok(spec)
    }

    /// Generators of the ideal of the coordinate center
    /// `{x_{e+1} = ... = x_d = 0}`; coefficient maps are extracted exactly
    /// for polynomial generators and by quadrature otherwise.
    pub fn generator_form(d: usize, e: usize, f: Vec<NashExpr>) -> Result<Self, DrillError> {
        if e >= d || f.is_empty() {
            return Err(DrillError::InvalidSpec("need e < d and at least one generator".into()));
        }
        let k = f.len();
        let fmap = NashMap::new(d, f);
        let zeta = match split_polynomials(d, e, &fmap)? {
            Some(maps) => Zeta::Maps(maps),
            None => Zeta::Integral {
                partials: (e..d)
                    .map(|j| fmap.components().iter().map(|fi| fi.partial(j)).collect())
                    .collect(),
                rule: gauss_legendre(QUADRATURE_NODES),
            },
        };
        let chart = Chart { psi: NashMap::identity(d), u: NashMap::identity(d), zeta };
        let spec = CenterSpec { d, e, k, generators: Some(fmap), chart: Some(chart) };
        spec.validate(0)?;
        Ok(spec)
    }

    /// Generators of an arbitrary center of dimension `e`. Only operations
    /// that need no chart are available.
    pub fn generator_form_general(d: usize, e: usize, f: Vec<NashExpr>) -> Result<Self, DrillError> {
        if e >= d || f.is_empty() {
            return Err(DrillError::InvalidSpec("need e < d and at least one generator".into()));
        }
        let k = f.len();
        let spec = CenterSpec { d, e, k, generators: Some(NashMap::new(d, f)), chart: None };
        spec.validate(0)?;
        Ok(spec)
    }

    pub fn has_chart(&self) -> bool {
        self.chart.is_some()
    }

    pub fn generators(&self) -> Option<&NashMap> {
        self.generators.as_ref()
    }

    fn chart(&self) -> Result<&Chart, DrillError> {
        self.chart.as_ref().ok_or(DrillError::UnsupportedSpec)
    }

    /// The vectors `ζ_{e+1}(x), ..., ζ_d(x)` at chart coordinates `x`.
    fn zeta_at(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, DrillError> {
        let chart = self.chart()?;
        Ok(match &chart.zeta {
            Zeta::Maps(maps) => maps.iter().map(|m| m.eval(x)).collect::<Result<_, _>>()?,
            Zeta::Integral { partials, rule } => {
                let (y, z) = x.split_at(self.e);
                let mut out = vec![vec![0.0; self.k]; partials.len()];
                for &(s, wgt) in rule {
                    let mut p = y.to_vec();
                    p.extend(z.iter().map(|v| s * v));
                    for (j, row) in partials.iter().enumerate() {
                        for (i, g) in row.iter().enumerate() {
                            out[j][i] += wgt * g.node().eval(&p)?;
                        }
                    }
                }
                out
            }
        })
    }

    fn combine(vectors: &[Vec<f64>], coeffs: &[f64], k: usize) -> Vec<f64> {
        let mut acc = vec![0.0; k];
        for (v, c) in vectors.iter().zip(coeffs) {
            for (a, vi) in acc.iter_mut().zip(v) {
                *a += c * vi;
            }
        }
        acc
    }

    /// The generator vector at a point of `M`: the generators themselves, or
    /// `Σ ζ_j(u(x)) z_j` for chart-form specs.
    pub fn f_at(&self, x: &[f64]) -> Result<Vec<f64>, DrillError> {
        if let Some(g) = &self.generators {
            return Ok(g.eval(x)?);
        }
        let chart = self.chart()?;
        let ux = chart.u.eval(x)?;
        let zs = self.zeta_at(&ux)?;
        Ok(Self::combine(&zs, &ux[self.e..], self.k))
    }

    /// Seeded points of the center in `M`.
    pub fn center_points(&self, n: usize, seed: u64) -> Result<Vec<Vec<f64>>, DrillError> {
        let mut rng = SplitMix64::new(seed);
        let mut out = Vec::with_capacity(n);
        match &self.chart {
            Some(chart) => {
                for _ in 0..n {
                    let mut x: Vec<f64> = (0..self.e).map(|_| rng.uniform(-1.0, 1.0)).collect();
                    x.resize(self.d, 0.0);
                    out.push(chart.psi.eval(&x)?);
                }
            }
            None => {
                let g = self.generators.as_ref().expect("generator form");
                let mut tries = 0;
                while out.len() < n && tries < 100 * n {
                    tries += 1;
                    let x0: Vec<f64> = (0..self.d).map(|_| rng.uniform(-1.0, 1.0)).collect();
                    if let Some(x) = gauss_newton(g, x0)? {
                        out.push(x);
                    }
                }
                if out.is_empty() {
                    return Err(DrillError::InvalidSpec("no center point found".into()));
                }
            }
        }
        Ok(out)
    }

    pub fn validate(&self, seed: u64) -> Result<(), DrillError> {
        let pts = self.center_points(VALIDATION_SAMPLES, seed)?;
        for q in &pts {
            if let Some(g) = &self.generators {
                let v = g.eval(q)?;
                if norm(&v) >= CENTER_EPS {
                    return Err(DrillError::InvalidSpec(format!(
                        "generators do not vanish at center point {q:?}"
                    )));
                }
                let j = jacobian_matrix(g, q)?;
                let rank = linalg::row_space_basis(&j, MIN_SINGULAR).len();
                if rank != self.d - self.e {
                    return Err(DrillError::InvalidSpec(format!(
                        "generator Jacobian has rank {rank} at {q:?}, expected {}",
                        self.d - self.e
                    )));
                }
            }
            if let Some(chart) = &self.chart {
                let uq = chart.u.eval(q)?;
                let cols = self.zeta_at(&uq)?;
                let s = linalg::min_singular_value(&linalg::from_columns(self.k, &cols));
                if s <= MIN_SINGULAR {
                    return Err(DrillError::InvalidSpec(format!(
                        "coefficient vectors dependent on the center (sigma = {s})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Gauss map `x -> f(x)/|f(x)|` off the center.
    pub fn gauss(&self, x: &[f64]) -> Result<Vec<f64>, DrillError> {
        let v = self.f_at(x)?;
        let n = norm(&v);
        if n <= ZERO_NORM {
            return Err(DrillError::OnCenter);
        }
        Ok(v.into_iter().map(|c| c / n).collect())
    }

    /// `Φ(y, ρ, w) = (ψ(y, ρw), φ/|φ|)` with `φ = Σ ζ_j(y, ρw) w_j`.
    pub fn phi(&self, y: &[f64], rho: f64, w: &[f64]) -> Result<DrillPoint, DrillError> {
        let chart = self.chart()?;
        let mut x = y.to_vec();
        x.extend(w.iter().map(|wi| rho * wi));
        let zs = self.zeta_at(&x)?;
        let phi = Self::combine(&zs, w, self.k);
        let n = norm(&phi);
        if n < ZERO_NORM {
            return Err(DrillError::DegenerateCoefficients);
        }
        Ok(DrillPoint { base: chart.psi.eval(&x)?, dir: phi.into_iter().map(|c| c / n).collect() })
    }

    /// Inverse of `Φ` on the set where the coefficient matrix has full rank.
    pub fn psi0(&self, p: &DrillPoint) -> Result<ChartTriple, DrillError> {
        let chart = self.chart()?;
        let x = chart.u.eval(&p.base)?;
        let cols = self.zeta_at(&x)?;
        let m = linalg::from_columns(self.k, &cols);
        let sigma = linalg::min_singular_value(&m);
        if sigma <= RANK_EPS {
            return Err(DrillError::RankDeficient { sigma });
        }
        let (v, _) = linalg::least_squares(&m, &p.dir).ok_or(DrillError::RankDeficient { sigma })?;
        let nv = norm(&v);
        let w: Vec<f64> = v.iter().map(|c| c / nv).collect();
        let rho = dot(&x[self.e..], &w);
        Ok(ChartTriple { y: x[..self.e].to_vec(), rho, w })
    }

    /// The boundary sphere over a center point.
    pub fn fiber_over(&self, q: &[f64]) -> Result<FiberSphere, DrillError> {
        let basis = match &self.chart {
            Some(chart) => {
                let uq = chart.u.eval(q)?;
                let zn = norm(&uq[self.e..]);
                if zn > CENTER_EPS {
                    return Err(DrillError::NotOnCenter { norm: zn });
                }
                self.zeta_at(&uq)?
            }
            None => {
                let g = self.generators.as_ref().expect("generator form");
                let fq = norm(&g.eval(q)?);
                if fq > CENTER_EPS {
                    return Err(DrillError::NotOnCenter { norm: fq });
                }
                let j = jacobian_matrix(g, q)?;
                let normal = linalg::row_space_basis(&j, MIN_SINGULAR);
                normal
                    .iter()
                    .map(|n| (&j * nalgebra::DVector::from_column_slice(n)).iter().copied().collect())
                    .collect()
            }
        };
        let s = linalg::min_singular_value(&linalg::from_columns(self.k, &basis));
        if basis.len() != self.d - self.e || s <= MIN_SINGULAR {
            return Err(DrillError::DegenerateCoefficients);
        }
        Ok(FiberSphere { q: q.to_vec(), k: self.k, basis })
    }

    /// Checks that, around the boundary point `Φ(y0, 0, w0)`, the projection
    /// reads `(y, ρ', v') -> (y, ρ', ρ'v')` after the coordinate changes
    /// `η` and `f`, and that `e_{e+1}` is sent to itself.
    pub fn local_rep_check(
        &self,
        y0: &[f64],
        w0: &[f64],
        tol: f64,
        samples: usize,
        seed: u64,
    ) -> Result<Outcome, DrillError> {
        let chart = self.chart()?;
        let (e, c) = (self.e, self.d - self.e);
        let rot = linalg::reflection_to(w0);
        let composite = |yrv: &[f64]| -> Result<Vec<f64>, DrillError> {
            let (y, rest) = yrv.split_at(e);
            let (rho_p, vp) = (rest[0], &rest[1..]);
            let n = libm::sqrt(1.0 + dot(vp, vp));
            let rho = rho_p * n;
            let v: Vec<f64> = vp.iter().map(|x| x / n).collect();
            let mut local = vec![libm::sqrt(1.0 - dot(&v, &v))];
            local.extend_from_slice(&v);
            let w: Vec<f64> = (&rot * nalgebra::DVector::from_column_slice(&local)).iter().copied().collect();
            let yy: Vec<f64> = y.iter().zip(y0).map(|(a, b)| a + b).collect();
            let p = self.phi(&yy, rho, &w)?;
            let x = chart.u.eval(&p.base)?;
            let mut out: Vec<f64> = x[..e].iter().zip(y0).map(|(a, b)| a - b).collect();
            let z = rot.transpose() * nalgebra::DVector::from_column_slice(&x[e..]);
            out.extend(z.iter());
            Ok(out)
        };
        let mut rng = SplitMix64::new(seed);
        let mut out = Outcome::new(tol);
        for _ in 0..samples {
            let s: Vec<f64> = (0..self.d).map(|_| rng.uniform(-0.5, 0.5)).collect();
            let mut expect = s.clone();
            for i in 1..c {
                expect[e + i] = s[e] * s[e + i];
            }
            out.record(dist(&composite(&s)?, &expect));
        }
        // dπ'_0(e_{e+1}) by central differences.
        let h = 1e-6;
        let mut plus = vec![0.0; self.d];
        let mut minus = vec![0.0; self.d];
        plus[e] = h;
        minus[e] = -h;
        let (a, b) = (composite(&plus)?, composite(&minus)?);
        let deriv: Vec<f64> = a.iter().zip(&b).map(|(p, m)| (p - m) / (2.0 * h)).collect();
        let mut unit = vec![0.0; self.d];
        unit[e] = 1.0;
        out.record(dist(&deriv, &unit));
        if norm(&deriv[e..]) < 0.5 {
            out.fail(format!("image of e_{} is tangent to the center: {deriv:?}", e + 1));
        }
        Ok(out)
    }

    /// Seeded points of the total space: chart samples through `Φ` (every
    /// tenth with `ρ = 0`), or graph points `(x, ±F(x))` plus boundary points
    /// for chartless specs.
    pub fn sample_points(&self, n: usize, seed: u64) -> Result<Vec<DrillPoint>, DrillError> {
        let mut rng = SplitMix64::new(seed);
        let c = self.d - self.e;
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            if self.chart.is_some() {
                let y: Vec<f64> = (0..self.e).map(|_| rng.uniform(-1.0, 1.0)).collect();
                let rho = if i % 10 == 9 { 0.0 } else { rng.uniform(-1.0, 1.0) };
                let w = rng.unit_vector(c);
                out.push(self.phi(&y, rho, &w)?);
            } else if i % 10 == 9 {
                let q = self.center_points(1, rng.next_u64())?.remove(0);
                let sphere = self.fiber_over(&q)?;
                out.push(DrillPoint { base: q, dir: sphere.map(&rng.unit_vector(c)) });
            } else {
                let x: Vec<f64> = (0..self.d).map(|_| rng.uniform(-1.0, 1.0)).collect();
                let mut dir = self.gauss(&x)?;
                if rng.coin() {
                    dir.iter_mut().for_each(|v| *v = -*v);
                }
                out.push(DrillPoint { base: x, dir });
            }
        }
        Ok(out)
    }

    /// Appends `Σ g_j f_j` to the generators.
    pub fn change_generators(&self, g: Vec<NashExpr>) -> Result<GeneratorChange, DrillError> {
        let f = self.generators.as_ref().ok_or(DrillError::UnsupportedSpec)?;
        if g.len() != self.k {
            return Err(DrillError::InvalidSpec(format!("need {} coefficients", self.k)));
        }
        let gmap = NashMap::new(self.d, g);
        let mut comps = f.components().to_vec();
        let extra = gmap
            .components()
            .iter()
            .zip(f.components())
            .map(|(a, b)| a.clone() * b.clone())
            .reduce(|a, b| a + b)
            .expect("k >= 1");
        comps.push(extra);
        let new = if self.chart.is_some() {
            CenterSpec::generator_form(self.d, self.e, comps)?
        } else {
            CenterSpec::generator_form_general(self.d, self.e, comps)?
        };
        Ok(GeneratorChange { old: self.clone(), new, g: gmap })
    }
}

/// Projective representative of `b`: the first coordinate of absolute
/// value above `ZERO_NORM` is made positive.
pub fn projective_rep(b: &[f64]) -> Vec<f64> {
    match b.iter().find(|v| v.abs() > ZERO_NORM) {
        Some(v) if *v < 0.0 => b.iter().map(|x| -x).collect(),
        _ => b.to_vec(),
    }
}

/// `(a, b) -> (a, [b])`.
pub fn classical_compare(p: &DrillPoint) -> (Vec<f64>, Vec<f64>) {
    (p.base.clone(), projective_rep(&p.dir))
}

fn jacobian_matrix(g: &NashMap, x: &[f64]) -> Result<DMatrix<f64>, DrillError> {
    let rows = g.jacobian_at(x)?;
    Ok(DMatrix::from_fn(g.target_dim(), g.source_dim(), |i, j| rows[i][j]))
}

/// Gauss-Newton projection onto `{g = 0}`.
fn gauss_newton(g: &NashMap, mut x: Vec<f64>) -> Result<Option<Vec<f64>>, DrillError> {
    for _ in 0..100 {
        let v = g.eval(&x)?;
        if norm(&v) < 1e-14 {
            return Ok(Some(x));
        }
        let j = jacobian_matrix(g, &x)?;
        let Some((step, _)) = linalg::least_squares(&j, &v) else { return Ok(None) };
        for (xi, s) in x.iter_mut().zip(&step) {
            *xi -= s;
        }
    }
    let v = g.eval(&x)?;
    Ok((norm(&v) < CENTER_EPS * 0.1).then_some(x))
}

type Terms = Vec<(Vec<u32>, crate::Q)>;

/// Splits polynomial generators of the coordinate center as
/// `f = Σ ζ_j(y, z) z_j`, assigning each monomial to its first `z` variable.
fn split_polynomials(d: usize, e: usize, f: &NashMap) -> Result<Option<Vec<NashMap>>, DrillError> {
    let polys: Option<Vec<Polynomial>> = f.components().iter().map(|c| c.to_polynomial()).collect();
    let Some(polys) = polys else { return Ok(None) };
    let c = d - e;
    // parts[j][i] collects the terms of f_i assigned to z_j.
    let mut parts: Vec<Vec<Terms>> = vec![vec![Vec::new(); polys.len()]; c];
    for (i, p) in polys.iter().enumerate() {
        for (exp, coef) in p.terms() {
            let Some(j) = (e..d).find(|&j| exp[j] > 0) else {
                return Err(DrillError::InvalidSpec(format!(
                    "generator {} does not vanish on the center",
                    i + 1
                )));
            };
            let mut ex = exp.clone();
            ex[j] -= 1;
            parts[j - e][i].push((ex, coef.clone()));
        }
    }
    let dom = f.domain().clone();
    Ok(Some(
        parts
            .into_iter()
            .map(|row| {
                NashMap::new(
                    d,
                    row.into_iter()
                        .map(|terms| Polynomial::from_terms(d, terms).to_expr(dom.clone()))
                        .collect(),
                )
            })
            .collect(),
    ))
}

/// `Δ(w) = Σ w_j v_j / |Σ w_j v_j|` over the basis vectors `v_j` at `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberSphere {
    pub q: Vec<f64>,
    pub k: usize,
    pub basis: Vec<Vec<f64>>,
}

impl FiberSphere {
    pub fn map(&self, w: &[f64]) -> Vec<f64> {
        let v = CenterSpec::combine(&self.basis, w, self.k);
        let n = norm(&v);
        v.into_iter().map(|c| c / n).collect()
    }

    /// Distance from `b` to the span of the basis.
    pub fn span_residual(&self, b: &[f64]) -> f64 {
        let m = linalg::from_columns(self.k, &self.basis);
        linalg::least_squares(&m, b).map(|(_, r)| r).unwrap_or(f64::INFINITY)
    }
}

/// The maps `Θ` and `Ψ` between the blow-ups for `f` and `(f, Σ g_j f_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorChange {
    pub old: CenterSpec,
    pub new: CenterSpec,
    pub g: NashMap,
}

impl GeneratorChange {
    pub fn theta(&self, p: &DrillPoint) -> Result<DrillPoint, DrillError> {
        let s = dot(&self.g.eval(&p.base)?, &p.dir);
        let n = libm::sqrt(1.0 + s * s);
        let mut dir: Vec<f64> = p.dir.iter().map(|b| b / n).collect();
        dir.push(s / n);
        Ok(DrillPoint { base: p.base.clone(), dir })
    }

    pub fn psi(&self, p: &DrillPoint) -> DrillPoint {
        let c = &p.dir[..self.old.k];
        let n = norm(c);
        DrillPoint { base: p.base.clone(), dir: c.iter().map(|v| v / n).collect() }
    }

    /// `Ψ∘Θ = id`, `π̂'∘Θ = π̂` and membership of `Θ(p)` in the new
    /// blow-up, on seeded drill points.
    pub fn verify(&self, samples: usize, seed: u64, tol: f64) -> Result<Outcome, DrillError> {
        let mut out = Outcome::new(tol);
        for p in self.old.sample_points(samples, seed)? {
            let t = self.theta(&p)?;
            if t.base != p.base {
                out.fail(format!("base point moved: {:?} -> {:?}", p.base, t.base));
            }
            let back = self.psi(&t);
            let mut err = dist(&back.dir, &p.dir);
            let fa = self.old.f_at(&p.base)?;
            if norm(&fa) > 1e-6 {
                let sign = if dot(&fa, &p.dir) >= 0.0 { 1.0 } else { -1.0 };
                let expect: Vec<f64> = self.new.gauss(&p.base)?.iter().map(|v| sign * v).collect();
                err = err.max(dist(&t.dir, &expect));
            } else {
                err = err.max(self.new.fiber_over(&p.base)?.span_residual(&t.dir));
            }
            out.record(err);
        }
        Ok(out)
    }
}

/// Surjection `M \ N -> M` for `M = R^d`, `N = R^e × {0}`: the radial
/// coordinate is pushed through the fold of `[0, inf)` and the result is
/// projected back through `Φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EraseMap {
    spec: CenterSpec,
    onto: InteriorOnto,
}

pub fn erase(spec: &CenterSpec) -> Result<EraseMap, DrillError> {
    let chart = spec.chart()?;
    if chart.psi != NashMap::identity(spec.d) {
        return Err(DrillError::UnsupportedSpec);
    }
    let onto = interior_onto(&BoundedModel::interval()).map_err(|_| DrillError::UnsupportedSpec)?;
    Ok(EraseMap { spec: spec.clone(), onto })
}

impl EraseMap {
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>, DrillError> {
        let e = self.spec.e;
        let z = &x[e..];
        let r = norm(z);
        if r == 0.0 {
            return Err(DrillError::OnCenter);
        }
        let w: Vec<f64> = z.iter().map(|v| v / r).collect();
        let r2 = self.onto.apply(&[r]).map_err(|_| DrillError::OnCenter)?[0];
        Ok(self.spec.phi(&x[..e], r2, &w)?.base)
    }

    pub fn preimage(&self, target: &[f64]) -> Result<Vec<f64>, DrillError> {
        let e = self.spec.e;
        let z = &target[e..];
        let r = norm(z);
        let (rho, w) = if r == 0.0 {
            let mut w = vec![0.0; z.len()];
            w[0] = 1.0;
            (FOLD_LEVEL, w)
        } else {
            let rho = self.onto.preimage(&[r]).map_err(|_| DrillError::OnCenter)?[0];
            (rho, z.iter().map(|v| v / r).collect())
        };
        let mut x = target[..e].to_vec();
        x.extend(w.iter().map(|v| rho * v));
        Ok(x)
    }

    pub fn verify_grid(&self, grid: &[Vec<f64>], tol: f64) -> Outcome {
        let mut out = Outcome::new(tol);
        for t in grid {
            match self.preimage(t).and_then(|x| self.apply(&x)) {
                Ok(img) => out.record(dist(&img, t)),
                Err(err) => out.fail(format!("grid point {t:?}: {err}")),
            }
        }
        out
    }
}

/// Grid of `[-2, 2]^d` with an odd number of points per axis (so the
/// center is included) and roughly a thousand points in total.
pub fn erase_grid(d: usize) -> Vec<Vec<f64>> {
    let per_axis = match d {
        1 => 1001,
        2 => 33,
        3 => 11,
        _ => 5,
    };
    crate::expr::DomainBox::cube(d, -2.0, 2.0).grid(per_axis)
}

#[cfg(test)]
mod tests;

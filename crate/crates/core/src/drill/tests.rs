use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::expr::DomainBox;
use crate::q;

fn var(d: usize, i: usize) -> NashExpr {
    NashExpr::var(d, i)
}

fn cst(d: usize, n: i64) -> NashExpr {
    NashExpr::constant(d, q(n, 1))
}

fn plane() -> CenterSpec {
    CenterSpec::generator_form(2, 0, vec![var(2, 0), var(2, 1)]).unwrap()
}

/// `(x1, x2 + x1 x2)`, vanishing only at the origin.
fn twisted() -> CenterSpec {
    CenterSpec::generator_form(2, 0, vec![var(2, 0), var(2, 1) + var(2, 0) * var(2, 1)]).unwrap()
}

/// Non-polynomial generators of the origin.
fn rational_generators() -> CenterSpec {
    let (x, y) = (var(2, 0), var(2, 1));
    let one = cst(2, 1);
    let f1 = x.clone() / (one.clone() + y.clone() * y.clone());
    let f2 = y * (one + x.clone() * x).sqrt();
    CenterSpec::generator_form(2, 0, vec![f1, f2]).unwrap()
}

/// `d = 3`, `e = 1`, coefficient maps depending on every coordinate.
fn curved_line() -> CenterSpec {
    let v = |i| var(3, i);
    let zeta1 = NashMap::new(3, vec![cst(3, 1), v(0), v(2) * v(2)]);
    let zeta2 = NashMap::new(3, vec![v(1), cst(3, 1) + v(0) * v(0), cst(3, 0)]);
    CenterSpec::chart_form(3, 1, vec![zeta1, zeta2]).unwrap()
}

fn specs() -> Vec<CenterSpec> {
    vec![
        CenterSpec::trivial(2, 0).unwrap(),
        CenterSpec::trivial(3, 1).unwrap(),
        twisted(),
        rational_generators(),
        curved_line(),
    ]
}

fn random_triple(spec: &CenterSpec, rng: &mut SplitMix64) -> (Vec<f64>, f64, Vec<f64>) {
    let y = (0..spec.e).map(|_| rng.uniform(-1.0, 1.0)).collect();
    (y, rng.uniform(-1.0, 1.0), rng.unit_vector(spec.d - spec.e))
}

#[test]
fn gauss_map_examples() {
    assert_eq!(plane().gauss(&[3.0, 4.0]).unwrap(), vec![0.6, 0.8]);
    assert_eq!(plane().gauss(&[1.0, 0.0]).unwrap(), vec![1.0, 0.0]);
    let f = CenterSpec::generator_form(2, 0, vec![var(2, 0), var(2, 0) + var(2, 1)]).unwrap();
    let g = f.gauss(&[1.0, 0.0]).unwrap();
    let s = 0.5f64.sqrt();
    assert!(dist(&g, &[s, s]) < 1e-15);
    assert_eq!(plane().gauss(&[0.0, 0.0]), Err(DrillError::OnCenter));
}

#[test]
fn invalid_specs_are_rejected() {
    let bad = CenterSpec::generator_form(2, 0, vec![var(2, 0) + cst(2, 1), var(2, 1)]);
    assert!(matches!(bad, Err(DrillError::InvalidSpec(_))));
    // Generators vanishing to second order have the wrong Jacobian rank.
    let flat = CenterSpec::generator_form_general(2, 1, vec![var(2, 1) * var(2, 1)]);
    assert!(matches!(flat, Err(DrillError::InvalidSpec(_))));
    let dependent = CenterSpec::chart_form(
        2,
        0,
        vec![
            NashMap::new(2, vec![cst(2, 1), cst(2, 0)]),
            NashMap::new(2, vec![cst(2, 2), cst(2, 0)]),
        ],
    );
    assert!(matches!(dependent, Err(DrillError::InvalidSpec(_))));
}

#[test]
fn integral_coefficients_reproduce_generators() {
    let spec = rational_generators();
    let f = spec.generators().unwrap().clone();
    let mut rng = SplitMix64::new(8);
    for _ in 0..200 {
        let x = vec![rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)];
        let zs = spec.zeta_at(&x).unwrap();
        let rebuilt = CenterSpec::combine(&zs, &x, 2);
        assert!(dist(&rebuilt, &f.eval(&x).unwrap()) < 1e-12);
    }
}

#[test]
fn phi_on_trivial_spec() {
    let spec = CenterSpec::trivial(3, 1).unwrap();
    let w = [0.6, -0.8];
    let p = spec.phi(&[2.0], 0.5, &w).unwrap();
    assert_eq!(p, DrillPoint { base: vec![2.0, 0.3, -0.4], dir: w.to_vec() });
    // At rho = 0 the whole sphere sits over the center point.
    let mut rng = SplitMix64::new(1);
    for _ in 0..100 {
        let w = rng.unit_vector(2);
        let p = spec.phi(&[2.0], 0.0, &w).unwrap();
        assert_eq!(p.base, vec![2.0, 0.0, 0.0]);
        assert!(dist(&p.dir, &w) < 1e-15);
    }
}

#[test]
fn phi_sign_flip_is_sigma() {
    let mut rng = SplitMix64::new(2);
    for spec in specs() {
        for _ in 0..200 {
            let (y, rho, w) = random_triple(&spec, &mut rng);
            let neg: Vec<f64> = w.iter().map(|v| -v).collect();
            let a = spec.phi(&y, -rho, &neg).unwrap();
            let b = spec.phi(&y, rho, &w).unwrap().sigma();
            assert_eq!(a.base, b.base);
            assert!(dist(&a.dir, &b.dir) < 1e-15);
        }
    }
}

#[test]
fn psi0_inverts_phi() {
    let spec = CenterSpec::trivial(3, 1).unwrap();
    let t = spec.psi0(&DrillPoint { base: vec![1.0, 3.0, 4.0], dir: vec![0.6, 0.8] }).unwrap();
    assert_eq!(t, ChartTriple { y: vec![1.0], rho: 5.0, w: vec![0.6, 0.8] });
    let mut rng = SplitMix64::new(3);
    for spec in specs() {
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let (y, rho, w) = random_triple(&spec, &mut rng);
            let p = spec.phi(&y, rho, &w).unwrap();
            let t = spec.psi0(&p).unwrap();
            worst = worst.max(dist(&t.y, &y)).max((t.rho - rho).abs()).max(dist(&t.w, &w));
            let back = spec.phi(&t.y, t.rho, &t.w).unwrap();
            worst = worst.max(dist(&back.base, &p.base)).max(dist(&back.dir, &p.dir));
        }
        assert!(worst < 1e-9, "{worst}");
    }
}

#[test]
fn psi0_reports_rank_deficiency() {
    // zeta_2 = (z2, 1 - z2) is independent of zeta_1 = (1, 0) except on z2 = 1.
    let z2 = var(2, 1);
    let spec = CenterSpec::chart_form(
        2,
        0,
        vec![
            NashMap::new(2, vec![cst(2, 1), cst(2, 0)]),
            NashMap::new(2, vec![z2.clone(), cst(2, 1) - z2]),
        ],
    )
    .unwrap();
    let probe = DrillPoint { base: vec![0.0, 1.0], dir: vec![1.0, 0.0] };
    assert!(matches!(spec.psi0(&probe), Err(DrillError::RankDeficient { .. })));
}

#[test]
fn fibers_over_the_center() {
    let mut rng = SplitMix64::new(4);
    let sphere = plane().fiber_over(&[0.0, 0.0]).unwrap();
    for _ in 0..100 {
        let w = rng.unit_vector(2);
        assert!(dist(&sphere.map(&w), &w) < 1e-15);
    }
    let trivial = CenterSpec::trivial(3, 1).unwrap();
    for y in [-3.0, 0.0, 0.7] {
        let s = trivial.fiber_over(&[y, 0.0, 0.0]).unwrap();
        for _ in 0..50 {
            let w = rng.unit_vector(2);
            assert!(dist(&s.map(&w), &w) < 1e-15);
        }
    }
    let ellipse = [var(2, 0), cst(2, 2) * var(2, 1)];
    for spec in [
        CenterSpec::generator_form(2, 0, ellipse.to_vec()).unwrap(),
        CenterSpec::generator_form_general(2, 0, ellipse.to_vec()).unwrap(),
    ] {
        let s = spec.fiber_over(&[0.0, 0.0]).unwrap();
        for _ in 0..100 {
            let b = s.map(&rng.unit_vector(2));
            assert!((norm(&b) - 1.0).abs() < 1e-12);
            assert!(s.span_residual(&b) < 1e-9);
        }
    }
    assert!(matches!(plane().fiber_over(&[0.1, 0.0]), Err(DrillError::NotOnCenter { .. })));
}

#[test]
fn fiber_of_a_curved_center_spans_its_normals() {
    // The unit circle in R^3 cut by x3 = 0: fibers are circles in R^2 spanned
    // by the Jacobian rows.
    let v = |i| var(3, i);
    let f = vec![v(0) * v(0) + v(1) * v(1) - cst(3, 1), v(2)];
    let spec = CenterSpec::generator_form_general(3, 1, f).unwrap();
    let mut rng = SplitMix64::new(5);
    for q in spec.center_points(20, 6).unwrap() {
        assert!((norm(&q[..2]) - 1.0).abs() < 1e-9 && q[2].abs() < 1e-9);
        let s = spec.fiber_over(&q).unwrap();
        for _ in 0..20 {
            let b = s.map(&rng.unit_vector(2));
            assert!((norm(&b) - 1.0).abs() < 1e-12 && s.span_residual(&b) < 1e-9);
        }
    }
    assert_eq!(spec.psi0(&DrillPoint { base: vec![1.0, 0.0, 0.0], dir: vec![1.0, 0.0] }), Err(DrillError::UnsupportedSpec));
}

#[test]
fn local_representation() {
    let mut rng = SplitMix64::new(7);
    for spec in [CenterSpec::trivial(2, 0).unwrap(), CenterSpec::trivial(3, 1).unwrap()] {
        let y0: Vec<f64> = (0..spec.e).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let w0 = rng.unit_vector(spec.d - spec.e);
        let r = spec.local_rep_check(&y0, &w0, 1e-14, 100, 9).unwrap();
        assert!(r.passed(), "{r:?}");
    }
    for spec in [twisted(), rational_generators(), curved_line()] {
        let y0: Vec<f64> = (0..spec.e).map(|_| 0.3).collect();
        let w0 = rng.unit_vector(spec.d - spec.e);
        let r = spec.local_rep_check(&y0, &w0, 1e-6, 100, 10).unwrap();
        assert!(r.passed(), "{r:?}");
    }
    let general = CenterSpec::generator_form_general(2, 0, vec![var(2, 0), var(2, 1)]).unwrap();
    assert_eq!(general.local_rep_check(&[], &[1.0, 0.0], 1e-6, 10, 0), Err(DrillError::UnsupportedSpec));
}

#[test]
fn generator_change() {
    let zero = plane().change_generators(vec![cst(2, 0), cst(2, 0)]).unwrap();
    let p = DrillPoint { base: vec![0.3, -0.2], dir: vec![0.6, 0.8] };
    let t = zero.theta(&p).unwrap();
    assert_eq!(t.dir, vec![0.6, 0.8, 0.0]);
    assert_eq!(zero.psi(&t), p);

    let ones = plane().change_generators(vec![cst(2, 1), cst(2, 1)]).unwrap();
    let mut worst = 0.0f64;
    for p in plane().sample_points(1000, 11).unwrap() {
        let t = ones.theta(&p).unwrap();
        assert_eq!(t.base, p.base);
        worst = worst.max(dist(&ones.psi(&t).dir, &p.dir));
    }
    assert!(worst < 1e-12, "{worst}");

    let x = var(2, 0);
    for (spec, g) in [
        (plane(), vec![cst(2, 1), cst(2, 1)]),
        (twisted(), vec![x.clone() * x.clone(), cst(2, -3)]),
        (rational_generators(), vec![cst(2, 2), x.clone()]),
    ] {
        let r = spec.change_generators(g).unwrap().verify(1000, 12, 1e-9).unwrap();
        assert!(r.passed() && r.samples == 1000, "{r:?}");
    }
    let v = |i| var(3, i);
    let circle = CenterSpec::generator_form_general(3, 1, vec![v(0) * v(0) + v(1) * v(1) - cst(3, 1), v(2)]).unwrap();
    let r = circle.change_generators(vec![v(1), cst(3, 1)]).unwrap().verify(300, 13, 1e-9).unwrap();
    assert!(r.passed(), "{r:?}");
    let chart_only = CenterSpec::trivial(2, 0).unwrap();
    assert_eq!(chart_only.change_generators(vec![]), Err(DrillError::UnsupportedSpec));
}

#[test]
fn classical_comparison_is_two_to_one() {
    let a = DrillPoint { base: vec![0.0, 0.0], dir: vec![1.0, 0.0] };
    assert_eq!(classical_compare(&a), classical_compare(&a.sigma()));
    assert_eq!(projective_rep(&[0.0, 1.0]), vec![0.0, 1.0]);
    assert_eq!(projective_rep(&[0.0, -1.0]), vec![0.0, 1.0]);
    for spec in specs() {
        let pts = spec.sample_points(1000, 14).unwrap();
        let mut fibers: BTreeMap<Vec<u64>, Vec<DrillPoint>> = BTreeMap::new();
        for p in pts.iter().flat_map(|p| [p.clone(), p.sigma()]) {
            let (x, l) = classical_compare(&p);
            let key = x.iter().chain(&l).map(|v| v.to_bits()).collect();
            let fiber = fibers.entry(key).or_default();
            if !fiber.contains(&p) {
                fiber.push(p);
            }
        }
        assert_eq!(fibers.len(), 1000);
        assert!(fibers.values().all(|f| f.len() == 2 && f[0].dir != f[1].dir));
    }
}

#[test]
fn erase_hits_every_grid_point() {
    for (d, e) in [(1, 0), (2, 0), (3, 1), (3, 0)] {
        let h = erase(&CenterSpec::trivial(d, e).unwrap()).unwrap();
        let grid = erase_grid(d);
        assert!(grid.iter().any(|x| norm(&x[e..]) == 0.0));
        let r = h.verify_grid(&grid, 1e-6);
        assert!(r.passed(), "d = {d}, e = {e}: {r:?}");
    }
    let h = erase(&CenterSpec::trivial(1, 0).unwrap()).unwrap();
    let x = h.preimage(&[0.0]).unwrap();
    assert!(x[0] != 0.0 && h.apply(&x).unwrap()[0].abs() < 1e-8);
    assert_eq!(h.apply(&[0.0]), Err(DrillError::OnCenter));
}

#[test]
fn erase_is_total_off_the_center() {
    let h = erase(&CenterSpec::trivial(2, 0).unwrap()).unwrap();
    let mut rng = SplitMix64::new(15);
    for _ in 0..10_000 {
        let x = [rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)];
        assert!(h.apply(&x).unwrap().iter().all(|v| v.is_finite()));
    }
}

#[test]
fn erase_requires_identity_parametrization() {
    assert_eq!(erase(&plane()).map(|_| ()), Ok(()));
    let psi = NashMap::new(2, vec![var(2, 0) + var(2, 1) * var(2, 1), var(2, 1)]);
    let u = NashMap::new(2, vec![var(2, 0) - var(2, 1) * var(2, 1), var(2, 1)]);
    let zeta = vec![NashMap::new(2, vec![cst(2, 1)])];
    let spec = CenterSpec::chart_form_with(2, 1, psi, u, zeta).unwrap();
    assert_eq!(erase(&spec), Err(DrillError::UnsupportedSpec));
    // psi is honoured by phi: pi(Phi(y, rho, w)) = psi(y, rho w).
    let p = spec.phi(&[1.0], 2.0, &[1.0]).unwrap();
    assert_eq!(p.base, vec![5.0, 2.0]);
    assert_eq!(spec.psi0(&p).unwrap(), ChartTriple { y: vec![1.0], rho: 2.0, w: vec![1.0] });
}

proptest! {
    #[test]
    fn prop_phi_structure(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        for spec in specs() {
            let (y, rho, w) = random_triple(&spec, &mut rng);
            let p = spec.phi(&y, rho, &w).unwrap();
            prop_assert!((norm(&p.dir) - 1.0).abs() <= 1e-12);
            let mut x = y.clone();
            x.extend(w.iter().map(|v| rho * v));
            prop_assert_eq!(&p.base, &x);
            // sigma has no fixed points.
            prop_assert!(dist(&p.dir, &p.sigma().dir) > 1.0);
        }
    }

    #[test]
    fn prop_projection_is_proper_on_boxes(seed in any::<u64>(), half in 0.1f64..3.0) {
        let k = DomainBox::cube(2, -half, half);
        let mut rng = SplitMix64::new(seed);
        let spec = twisted();
        for _ in 0..50 {
            let a = k.sample(&mut rng);
            let Ok(dir) = spec.gauss(&a) else { continue };
            let p = DrillPoint { base: a, dir };
            for p in [p.sigma(), p] {
                prop_assert!(k.contains(&p.base));
                prop_assert!((norm(&p.dir) - 1.0).abs() <= 1e-12);
            }
        }
    }
}

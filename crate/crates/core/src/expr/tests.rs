use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::q;
use crate::rng::SplitMix64;

fn x(i: usize) -> NashExpr {
    NashExpr::var(2, i)
}

fn c(n: i64, d: i64) -> NashExpr {
    NashExpr::constant(2, q(n, d))
}

#[test]
fn eval_basic_and_errors() {
    let e = (x(0) * x(0) + c(1, 1)).sqrt();
    assert!((e.eval(&[3.0, 0.0]).unwrap() - 10f64.sqrt()).abs() < 1e-15);

    let neg = (c(0, 1) - x(0)).sqrt();
    assert_eq!(neg.eval(&[-4.0, 0.0]).unwrap(), 2.0);
    assert!(matches!(neg.eval(&[1.0, 0.0]), Err(ExprError::NegativeSqrtArgument { .. })));
    // Tiny negative arguments are clamped rather than rejected.
    assert_eq!(neg.eval(&[1e-13, 0.0]).unwrap(), 0.0);

    let quot = c(1, 1) / x(1);
    assert_eq!(quot.eval(&[0.0, 0.0]), Err(ExprError::DivisionByZero));
    assert_eq!(quot.eval(&[0.0]), Err(ExprError::DimensionMismatch { expected: 2, found: 1 }));

    let boxed = x(0).with_domain(DomainBox::new(vec![(0.0, 1.0), (0.0, 1.0)]));
    assert_eq!(boxed.eval(&[2.0, 0.5]), Err(ExprError::OutOfDomain));
}

#[test]
fn exact_evaluation() {
    // t/(2 sqrt(1+t^2)) + 1/2 at t = 3/4 is 4/5.
    let t = NashExpr::var(1, 0);
    let one = NashExpr::constant(1, q(1, 1));
    let two = NashExpr::constant(1, q(2, 1));
    let half = NashExpr::constant(1, q(1, 2));
    let f = t.clone() / (two * (one + t.clone() * t).sqrt()) + half;
    assert_eq!(f.eval_q(&[q(3, 4)]).unwrap(), q(4, 5));
    assert_eq!(f.eval_q(&[q(1, 1)]), Err(ExprError::Irrational));
}

#[test]
fn sqrt_derivative_rule() {
    // d/dx sqrt(x^2+1) = x / sqrt(x^2+1)
    let e = (x(0) * x(0) + c(1, 1)).sqrt();
    let d = e.partial(0);
    for &v in &[-2.0, 0.0, 0.5, 3.0] {
        let expect = v / (v * v + 1.0f64).sqrt();
        assert!((d.eval(&[v, 1.0]).unwrap() - expect).abs() < 1e-14);
    }
    assert_eq!(e.partial(1).eval(&[1.0, 1.0]).unwrap(), 0.0);
}

#[test]
fn compose_and_mismatch() {
    let outer = NashMap::new(2, vec![x(0) * x(1), x(0) - x(1)]);
    let t = NashExpr::var(1, 0);
    let inner = NashMap::new(1, vec![t.clone(), t.clone() * t]);
    let comp = outer.compose(&inner).unwrap();
    assert_eq!(comp.eval(&[2.0]).unwrap(), vec![8.0, -2.0]);
    assert!(matches!(
        inner.compose(&inner),
        Err(ExprError::DimensionMismatch { expected: 1, found: 2 })
    ));
}

#[test]
fn polynomial_roundtrip() {
    let e = (x(0) + c(1, 2)) * (x(1) - c(1, 1)) / c(3, 1);
    let p = e.to_polynomial().unwrap();
    let pts = [q(2, 3), q(-5, 7)];
    assert_eq!(p.eval_q(&pts), e.eval_q(&pts).unwrap());
    assert_eq!(p.to_expr(DomainBox::unbounded(2)).eval_q(&pts).unwrap(), p.eval_q(&pts));
    assert!(x(0).sqrt().to_polynomial().is_none());
}

fn fd_disagreements(seed: u64, count: usize) -> Vec<(usize, f64, f64)> {
    let mut rng = SplitMix64::new(seed);
    let mut bad = Vec::new();
    for k in 0..count {
        let arity = 1 + rng.below(3);
        let e = random_expr(&mut rng, arity, 4);
        let p: Vec<f64> = (0..arity).map(|_| rng.uniform(-2.0, 2.0)).collect();
        for i in 0..arity {
            let sym = e.partial(i).eval(&p).unwrap();
            let fd = e.partial_fd(i, &p, FD_STEP).unwrap();
            if (sym - fd).abs() > fd_tolerance(sym) {
                bad.push((k, sym, fd));
            }
        }
    }
    bad
}

#[test]
fn symbolic_matches_finite_difference() {
    assert!(fd_disagreements(11, 200).is_empty());
}

proptest! {
    #[test]
    fn prop_symbolic_matches_fd(seed in any::<u64>()) {
        prop_assert!(fd_disagreements(seed, 5).is_empty());
    }

    #[test]
    fn prop_polynomial_ring_laws(a in -5i64..5, b in -5i64..5, n in 1i64..5) {
        let p = Polynomial::from_terms(2, [(vec![1, 0], q(a, 1)), (vec![0, 2], q(b, n))]);
        let r = Polynomial::from_terms(2, [(vec![0, 1], q(1, n)), (vec![0, 0], q(a, 1))]);
        prop_assert_eq!(&(&p * &r) - &(&r * &p), Polynomial::zero(2));
        prop_assert_eq!(&(&p + &r) - &r, p.clone());
        // Leibniz rule is exact.
        let lhs = (&p * &r).partial(1);
        let rhs = &(&p.partial(1) * &r) + &(&p * &r.partial(1));
        prop_assert_eq!(lhs, rhs);
    }
}

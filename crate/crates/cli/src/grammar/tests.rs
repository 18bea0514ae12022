use nash_atlas_core::q;
use proptest::prelude::*;

use super::*;

fn at(src: &str, x: &[f64]) -> f64 {
    parse_expr(src, Some(x.len())).unwrap().eval(x).unwrap()
}

#[test]
fn precedence_and_associativity() {
    assert_eq!(at("1 + 2*3", &[]), 7.0);
    assert_eq!(at("8 - 3 - 2", &[]), 3.0);
    assert_eq!(at("12/3/2", &[]), 2.0);
    assert_eq!(at("-x1^2", &[3.0]), -9.0);
    assert_eq!(at("(-x1)^2", &[3.0]), 9.0);
    assert_eq!(at("2*-x1", &[3.0]), -6.0);
    assert_eq!(at("x1^(-2)", &[2.0]), 0.25);
    assert_eq!(at("x1^0", &[5.0]), 1.0);
    assert_eq!(at(" sqrt( x1 ^2 + x2^ 2 ) ", &[3.0, 4.0]), 5.0);
}

#[test]
fn rationals_are_exact() {
    assert_eq!(parse_rational("5/12").unwrap(), q(5, 12));
    assert_eq!(parse_rational("-1/5").unwrap(), q(-1, 5));
    assert_eq!(parse_rational("0.125").unwrap(), q(1, 8));
    assert_eq!(parse_rational("sqrt(9/4)").unwrap(), q(3, 2));
    assert_eq!(parse_rational("123456789012345678901234567890/10").unwrap().to_string(), "12345678901234567890123456789");
    assert!(matches!(parse_rational("sqrt(2)"), Err(ParseError::NotConstant(_))));
    assert!(matches!(parse_rational("x1"), Err(ParseError::ArityExceeded { index: 1, arity: 0 })));
}

#[test]
fn polynomials() {
    let p = parse_polynomial("(x1 - x2)*(x1 + x2)", None).unwrap();
    assert_eq!(p.arity(), 2);
    assert_eq!(p.degree(), 2);
    assert_eq!(p.eval(&[3.0, 1.0]), 8.0);
    assert!(matches!(parse_polynomial("1/x1", None), Err(ParseError::NotPolynomial(_))));
    assert_eq!(parse_polynomial("x1 / 2", None).unwrap().eval(&[3.0]), 1.5);
}

#[test]
fn arity_inference() {
    assert_eq!(parse_expr("x3 + 1", None).unwrap().arity(), 3);
    assert_eq!(parse_expr("7", None).unwrap().arity(), 0);
    assert_eq!(parse_expr("x1", Some(4)).unwrap().arity(), 4);
}

#[test]
fn errors() {
    assert_eq!(parse_expr("", None), Err(ParseError::Eof));
    assert_eq!(parse_expr("1 +", None), Err(ParseError::Eof));
    assert_eq!(parse_expr("x0", None), Err(ParseError::ZeroVariable));
    assert!(matches!(parse_expr("2 $ 3", None), Err(ParseError::Unexpected { at: 2, .. })));
    assert!(matches!(parse_expr("(x1", None), Err(ParseError::Eof)));
    assert!(matches!(parse_expr("x1 x2", None), Err(ParseError::Unexpected { at: 3, .. })));
    assert!(matches!(parse_expr("x1^x2", None), Err(ParseError::Unexpected { .. })));
    assert!(matches!(parse_expr("x1^1.5", None), Err(ParseError::Unexpected { .. })));
    assert!(matches!(parse_expr("x1^100", None), Err(ParseError::ExponentTooLarge(_))));
    assert!(matches!(parse_expr("y", None), Err(ParseError::Unexpected { .. })));
}

proptest! {
    // Printing a random expression and reading it back evaluates the same.
    #[test]
    fn prop_display_round_trip(seed in any::<u64>(), arity in 1usize..4) {
        let mut rng = nash_atlas_core::rng::SplitMix64::new(seed);
        let e = nash_atlas_core::expr::random_expr(&mut rng, arity, 4);
        let back = parse_expr(&e.to_string(), Some(arity)).unwrap();
        for _ in 0..5 {
            let x: Vec<f64> = (0..arity).map(|_| rng.uniform(-2.0, 2.0)).collect();
            let (a, b) = (e.eval(&x).unwrap(), back.eval(&x).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{} vs {}", a, b);
        }
    }
}

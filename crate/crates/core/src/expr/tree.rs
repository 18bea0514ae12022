use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{DomainBox, ExprError, Polynomial};
use crate::Q;

/// Arguments of a square root in `[-SQRT_CLAMP, 0)` evaluate as zero.
pub const SQRT_CLAMP: f64 = 1e-12;
/// Denominators smaller than this in absolute value are treated as zero.
pub const DIV_EPS: f64 = 1e-300;

#[derive(Clone, Debug)]
pub struct Constant {
    pub value: Q,
    approx: f64,
}

impl PartialEq for Constant {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Const(Constant),
    Var(usize),
    Sum(Box<Node>, Box<Node>),
    Diff(Box<Node>, Box<Node>),
    Prod(Box<Node>, Box<Node>),
    Quot(Box<Node>, Box<Node>),
    Sqrt(Box<Node>),
}

// Smart constructors that fold constants; named after the operators they build.
#[allow(clippy::should_implement_trait)]
impl Node {
    pub fn constant(value: Q) -> Node {
        let approx = value.to_f64().unwrap_or(f64::NAN);
        Node::Const(Constant { value, approx })
    }

    fn as_const(&self) -> Option<&Q> {
        match self {
            Node::Const(c) => Some(&c.value),
            _ => None,
        }
    }

    fn is_const(&self, v: i64) -> bool {
        self.as_const().is_some_and(|c| *c == Q::from_integer(v.into()))
    }

    pub fn add(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Node::constant(x + y),
            _ if a.is_const(0) => b,
            _ if b.is_const(0) => a,
            _ => Node::Sum(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Node::constant(x - y),
            _ if b.is_const(0) => a,
            _ => Node::Diff(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Node::constant(x * y),
            _ if a.is_const(0) || b.is_const(0) => Node::constant(Q::zero()),
            _ if a.is_const(1) => b,
            _ if b.is_const(1) => a,
            _ => Node::Prod(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Node, b: Node) -> Node {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if !y.is_zero() => Node::constant(x / y),
            _ if b.is_const(1) => a,
            _ if a.is_const(0) && b.as_const().is_none() => Node::constant(Q::zero()),
            _ => Node::Quot(Box::new(a), Box::new(b)),
        }
    }

    pub fn sqrt(a: Node) -> Node {
        if let Some(r) = a.as_const().and_then(exact_sqrt) {
            return Node::constant(r);
        }
        Node::Sqrt(Box::new(a))
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, ExprError> {
        Ok(match self {
            Node::Const(c) => c.approx,
            Node::Var(i) => x[*i],
            Node::Sum(a, b) => a.eval(x)? + b.eval(x)?,
            Node::Diff(a, b) => a.eval(x)? - b.eval(x)?,
            Node::Prod(a, b) => a.eval(x)? * b.eval(x)?,
            Node::Quot(a, b) => {
                let d = b.eval(x)?;
                if libm::fabs(d) < DIV_EPS {
                    return Err(ExprError::DivisionByZero);
                }
                a.eval(x)? / d
            }
            Node::Sqrt(a) => {
                let v = a.eval(x)?;
                if v < -SQRT_CLAMP {
                    return Err(ExprError::NegativeSqrtArgument { value: v });
                }
                libm::sqrt(v.max(0.0))
            }
        })
    }

    pub fn eval_q(&self, x: &[Q]) -> Result<Q, ExprError> {
        Ok(match self {
            Node::Const(c) => c.value.clone(),
            Node::Var(i) => x[*i].clone(),
            Node::Sum(a, b) => a.eval_q(x)? + b.eval_q(x)?,
            Node::Diff(a, b) => a.eval_q(x)? - b.eval_q(x)?,
            Node::Prod(a, b) => a.eval_q(x)? * b.eval_q(x)?,
            Node::Quot(a, b) => {
                let d = b.eval_q(x)?;
                if d.is_zero() {
                    return Err(ExprError::DivisionByZero);
                }
                a.eval_q(x)? / d
            }
            Node::Sqrt(a) => {
                let v = a.eval_q(x)?;
                if v.is_negative() {
                    return Err(ExprError::NegativeSqrtArgument {
                        value: v.to_f64().unwrap_or(f64::NAN),
                    });
                }
                exact_sqrt(&v).ok_or(ExprError::Irrational)?
            }
        })
    }

    pub fn partial(&self, i: usize) -> Node {
        match self {
            Node::Const(_) => Node::constant(Q::zero()),
            Node::Var(j) => Node::constant(if *j == i { Q::one() } else { Q::zero() }),
            Node::Sum(a, b) => Node::add(a.partial(i), b.partial(i)),
            Node::Diff(a, b) => Node::sub(a.partial(i), b.partial(i)),
            Node::Prod(a, b) => Node::add(
                Node::mul(a.partial(i), (**b).clone()),
                Node::mul((**a).clone(), b.partial(i)),
            ),
            Node::Quot(a, b) => {
                let num = Node::sub(
                    Node::mul(a.partial(i), (**b).clone()),
                    Node::mul((**a).clone(), b.partial(i)),
                );
                Node::div(num, Node::mul((**b).clone(), (**b).clone()))
            }
            Node::Sqrt(_) => {
                let Node::Sqrt(u) = self else { unreachable!() };
                let du = u.partial(i);
                if du.is_const(0) {
                    return du;
                }
                Node::div(du, Node::mul(Node::constant(Q::from_integer(2.into())), self.clone()))
            }
        }
    }

    pub fn substitute(&self, subs: &[Node]) -> Node {
        match self {
            Node::Const(_) => self.clone(),
            Node::Var(i) => subs[*i].clone(),
            Node::Sum(a, b) => Node::add(a.substitute(subs), b.substitute(subs)),
            Node::Diff(a, b) => Node::sub(a.substitute(subs), b.substitute(subs)),
            Node::Prod(a, b) => Node::mul(a.substitute(subs), b.substitute(subs)),
            Node::Quot(a, b) => Node::div(a.substitute(subs), b.substitute(subs)),
            Node::Sqrt(a) => Node::sqrt(a.substitute(subs)),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            Node::Const(_) => None,
            Node::Var(i) => Some(*i),
            Node::Sum(a, b) | Node::Diff(a, b) | Node::Prod(a, b) | Node::Quot(a, b) => {
                a.max_var().max(b.max_var())
            }
            Node::Sqrt(a) => a.max_var(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Sum(a, b) | Node::Diff(a, b) | Node::Prod(a, b) | Node::Quot(a, b) => {
                1 + a.size() + b.size()
            }
            Node::Sqrt(a) => 1 + a.size(),
        }
    }

    pub fn to_polynomial(&self, arity: usize) -> Option<Polynomial> {
        Some(match self {
            Node::Const(c) => Polynomial::constant(arity, c.value.clone()),
            Node::Var(i) => Polynomial::var(arity, *i),
            Node::Sum(a, b) => &a.to_polynomial(arity)? + &b.to_polynomial(arity)?,
            Node::Diff(a, b) => &a.to_polynomial(arity)? - &b.to_polynomial(arity)?,
            Node::Prod(a, b) => &a.to_polynomial(arity)? * &b.to_polynomial(arity)?,
            Node::Quot(a, b) => {
                let d = b.to_polynomial(arity)?.as_constant()?;
                if d.is_zero() {
                    return None;
                }
                a.to_polynomial(arity)?.scale(&d.recip())
            }
            Node::Sqrt(_) => return None,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Node::Sum(..) | Node::Diff(..) => 1,
            Node::Prod(..) | Node::Quot(..) => 2,
            Node::Const(c) if !c.value.is_integer() || c.value.is_negative() => 0,
            _ => 3,
        }
    }
}

/// Exact square root of a non-negative rational, if it is rational.
pub fn exact_sqrt(v: &Q) -> Option<Q> {
    if v.is_negative() {
        return None;
    }
    let (n, d) = (v.numer(), v.denom());
    let (rn, rd): (BigInt, BigInt) = (num_integer::Roots::sqrt(n), num_integer::Roots::sqrt(d));
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Q::new(rn, rd))
}

struct Wrapped<'a>(&'a Node, u8);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) => write!(f, "{}", c.value),
            Node::Var(i) => write!(f, "x{}", i + 1),
            Node::Sum(a, b) => write!(f, "{} + {}", Wrapped(a, 1), Wrapped(b, 2)),
            Node::Diff(a, b) => write!(f, "{} - {}", Wrapped(a, 1), Wrapped(b, 2)),
            Node::Prod(a, b) => write!(f, "{}*{}", Wrapped(a, 2), Wrapped(b, 3)),
            Node::Quot(a, b) => write!(f, "{}/{}", Wrapped(a, 2), Wrapped(b, 3)),
            Node::Sqrt(a) => write!(f, "sqrt({})", a),
        }
    }
}

/// A Nash function: an expression tree over `arity` variables together with
/// the box on which it is declared.
#[derive(Clone, Debug, PartialEq)]
pub struct NashExpr {
    arity: usize,
    domain: DomainBox,
    node: Node,
}

impl NashExpr {
    pub fn from_node(arity: usize, domain: DomainBox, node: Node) -> Self {
        assert_eq!(domain.dim(), arity, "domain dimension must equal arity");
        if let Some(m) = node.max_var() {
            assert!(m < arity, "variable x{} exceeds arity {}", m + 1, arity);
        }
        NashExpr { arity, domain, node }
    }

    pub fn constant(arity: usize, c: Q) -> Self {
        Self::from_node(arity, DomainBox::unbounded(arity), Node::constant(c))
    }

    pub fn var(arity: usize, i: usize) -> Self {
        Self::from_node(arity, DomainBox::unbounded(arity), Node::Var(i))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn with_domain(mut self, domain: DomainBox) -> Self {
        assert_eq!(domain.dim(), self.arity);
        self.domain = domain;
        self
    }

    fn check_point(&self, len: usize) -> Result<(), ExprError> {
        if len != self.arity {
            return Err(ExprError::DimensionMismatch { expected: self.arity, found: len });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, ExprError> {
        self.check_point(x.len())?;
        if !self.domain.contains(x) {
            return Err(ExprError::OutOfDomain);
        }
        self.node.eval(x)
    }

    /// Exact value at a rational point; fails with `Irrational` when a square
    /// root of a non-square is reached.
    pub fn eval_q(&self, x: &[Q]) -> Result<Q, ExprError> {
        self.check_point(x.len())?;
        if !self.domain.contains_q(x) {
            return Err(ExprError::OutOfDomain);
        }
        self.node.eval_q(x)
    }

    pub fn partial(&self, i: usize) -> NashExpr {
        assert!(i < self.arity);
        NashExpr { arity: self.arity, domain: self.domain.clone(), node: self.node.partial(i) }
    }

    pub fn gradient(&self) -> Vec<NashExpr> {
        (0..self.arity).map(|i| self.partial(i)).collect()
    }

    /// Central finite difference of `partial(i)` at `x`.
    pub fn partial_fd(&self, i: usize, x: &[f64], step: f64) -> Result<f64, ExprError> {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += step;
        xm[i] -= step;
        Ok((self.node.eval(&xp)? - self.node.eval(&xm)?) / (2.0 * step))
    }

    /// Replaces variable `i` by `subs[i]`. All substitutes must share an
    /// arity and domain, which the result inherits.
    pub fn substitute(&self, subs: &[NashExpr]) -> Result<NashExpr, ExprError> {
        if subs.len() != self.arity {
            return Err(ExprError::DimensionMismatch { expected: self.arity, found: subs.len() });
        }
        let Some(first) = subs.first() else {
            return Ok(self.clone());
        };
        let nodes: Vec<Node> = subs.iter().map(|s| s.node.clone()).collect();
        Ok(NashExpr {
            arity: first.arity,
            domain: first.domain.clone(),
            node: self.node.substitute(&nodes),
        })
    }

    pub fn to_polynomial(&self) -> Option<Polynomial> {
        self.node.to_polynomial(self.arity)
    }

    pub fn size(&self) -> usize {
        self.node.size()
    }

    fn binary(self, rhs: NashExpr, op: fn(Node, Node) -> Node) -> NashExpr {
        assert_eq!(self.arity, rhs.arity, "arity mismatch");
        let domain = self.domain.intersect(&rhs.domain);
        NashExpr { arity: self.arity, domain, node: op(self.node, rhs.node) }
    }

    pub fn sqrt(self) -> NashExpr {
        NashExpr { node: Node::sqrt(self.node), ..self }
    }

    pub fn scale(self, c: Q) -> NashExpr {
        let k = NashExpr::constant(self.arity, c);
        k * self
    }
}

impl core::ops::Add for NashExpr {
    type Output = NashExpr;
    fn add(self, rhs: NashExpr) -> NashExpr {
        self.binary(rhs, Node::add)
    }
}

impl core::ops::Sub for NashExpr {
    type Output = NashExpr;
    fn sub(self, rhs: NashExpr) -> NashExpr {
        self.binary(rhs, Node::sub)
    }
}

impl core::ops::Mul for NashExpr {
    type Output = NashExpr;
    fn mul(self, rhs: NashExpr) -> NashExpr {
        self.binary(rhs, Node::mul)
    }
}

impl core::ops::Div for NashExpr {
    type Output = NashExpr;
    fn div(self, rhs: NashExpr) -> NashExpr {
        self.binary(rhs, Node::div)
    }
}

impl core::ops::Neg for NashExpr {
    type Output = NashExpr;
    fn neg(self) -> NashExpr {
        let zero = NashExpr::constant(self.arity, Q::zero());
        zero - self
    }
}

impl fmt::Display for NashExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.node)
    }
}

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};

use super::{DomainBox, NashExpr, Node};
use crate::Q;

/// Multivariate polynomial with rational coefficients, stored sparsely by
/// exponent vector. Zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct Polynomial {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Q>,
    float_terms: Vec<(Vec<u32>, f64)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn from_terms<I>(arity: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Q)>,
    {
        let mut map: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (e, c) in terms {
            assert_eq!(e.len(), arity, "exponent vector length must equal arity");
            *map.entry(e).or_insert_with(Q::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let float_terms = map
            .iter()
            .map(|(e, c)| (e.clone(), c.to_f64().unwrap_or(f64::NAN)))
            .collect();
        Polynomial { arity, terms: map, float_terms }
    }

    pub fn zero(arity: usize) -> Self {
        Self::from_terms(arity, [])
    }

    pub fn constant(arity: usize, c: Q) -> Self {
        Self::from_terms(arity, [(vec![0; arity], c)])
    }

    pub fn var(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::from_terms(arity, [(e, Q::one())])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// The coefficient value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_terms(self.arity, self.terms.iter().map(|(e, k)| (e.clone(), k * c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.arity, Q::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval_q(&self, x: &[Q]) -> Q {
        assert_eq!(x.len(), self.arity);
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    m *= xi;
                }
            }
            s += m;
        }
        s
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.arity);
        self.float_terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, xi)| acc * powi(*xi, k))
            })
            .sum()
    }

    pub fn partial(&self, i: usize) -> Self {
        Self::from_terms(
            self.arity,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                let k = e2[i];
                e2[i] -= 1;
                (e2, c * Q::from_integer(k.into()))
            }),
        )
    }

    /// Substitutes polynomial `subs[i]` for variable `i`; every substitute
    /// must share one arity, which becomes the arity of the result.
    pub fn substitute(&self, subs: &[Polynomial]) -> Self {
        assert_eq!(subs.len(), self.arity);
        let out = subs.first().map(|p| p.arity).unwrap_or(0);
        let mut acc = Self::zero(out);
        for (e, c) in &self.terms {
            let mut m = Self::constant(out, c.clone());
            for (p, &k) in subs.iter().zip(e) {
                m = &m * &p.pow(k);
            }
            acc = &acc + &m;
        }
        acc
    }

    pub fn to_expr(&self, domain: DomainBox) -> NashExpr {
        NashExpr::from_node(self.arity, domain, self.to_node())
    }

    pub(crate) fn to_node(&self) -> Node {
        let mut acc = Node::constant(Q::zero());
        for (e, c) in &self.terms {
            let mut m = Node::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m = Node::mul(m, Node::Var(i));
                }
            }
            acc = Node::add(acc, m);
        }
        acc
    }
}

fn powi(x: f64, k: u32) -> f64 {
    let mut r = 1.0;
    for _ in 0..k {
        r *= x;
    }
    r
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.arity, rhs.arity);
        Polynomial::from_terms(
            self.arity,
            self.terms.iter().chain(rhs.terms.iter()).map(|(e, c)| (e.clone(), c.clone())),
        )
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_terms(self.arity, self.terms.iter().map(|(e, c)| (e.clone(), -c)))
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.arity, rhs.arity);
        let mut out = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.push((e, c1 * c2));
            }
        }
        Polynomial::from_terms(self.arity, out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_node())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn x(i: usize) -> Polynomial {
        Polynomial::var(2, i)
    }

    #[test]
    fn arithmetic_normalizes() {
        let p = &x(0) + &x(1);
        let d = &p - &x(1);
        assert_eq!(d, x(0));
        assert!((&p - &p).is_zero());
        let sq = &p * &p;
        assert_eq!(sq.terms().count(), 3);
        assert_eq!(sq.eval_q(&[q(1, 2), q(1, 3)]), q(25, 36));
    }

    #[test]
    fn partial_and_substitute() {
        // p = x0^2 x1 + 3 x1
        let p = Polynomial::from_terms(2, [(vec![2, 1], q(1, 1)), (vec![0, 1], q(3, 1))]);
        assert_eq!(p.partial(0), Polynomial::from_terms(2, [(vec![1, 1], q(2, 1))]));
        let t = Polynomial::var(1, 0);
        let sub = p.substitute(&[t.clone(), &t * &t]);
        assert_eq!(sub, Polynomial::from_terms(1, [(vec![4], q(1, 1)), (vec![2], q(3, 1))]));
    }
}

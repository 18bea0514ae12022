//! Constructions on affine Nash manifolds: expression kernels, semialgebraic
//! sets, one-dimensional model maps, Nash doubles, drillings, simplicial
//! surgery and orthant welding.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod doubles;
pub mod drill;
pub mod expr;
pub mod linalg;
pub mod quadrature;
pub mod report;
pub mod rng;
pub mod roots;
pub mod sets;
pub mod simplicial;
pub mod weld;

pub use num_rational::BigRational as Q;

/// Shorthand for the rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

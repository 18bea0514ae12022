//! Nash functions and maps as expression trees over `+ - * /` and square
//! roots, with exact rational polynomials underneath.

mod domain;
mod map;
mod poly;
mod random;
mod tree;

pub use domain::DomainBox;
pub use map::NashMap;
pub use poly::Polynomial;
pub use random::random_expr;
pub use tree::{exact_sqrt, Constant, NashExpr, Node, DIV_EPS, SQRT_CLAMP};

/// Finite-difference step used when checking symbolic derivatives.
pub const FD_STEP: f64 = 1e-5;

/// Agreement threshold between a symbolic derivative value `v` and its
/// central finite difference.
pub fn fd_tolerance(v: f64) -> f64 {
    f64::max(1e-6, 1e-6 * libm::fabs(v))
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("square root of negative value {value}")]
    NegativeSqrtArgument { value: f64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("point outside the declared domain")]
    OutOfDomain,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("value is not rational")]
    Irrational,
}

#[cfg(test)]
mod tests;

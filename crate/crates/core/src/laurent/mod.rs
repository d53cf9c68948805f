//! Laurent monomials and polynomials: exponent vectors, the grevlex order,
//! supports, and monomial shifts.

mod monomial;
mod poly;
mod set;

pub use monomial::{grevlex_cmp, Grevlex, Monomial, EXPONENT_LIMIT};
pub use poly::{eval_monomial, poly_shift, support, Coefficient, LaurentPoly, LaurentSystem};
pub use set::MonomialSet;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("exponent {0} is out of range")]
    ExponentOverflow(i32),
    #[error("monomial {0} appears twice in one polynomial")]
    DuplicateMonomial(String),
    #[error("polynomial {0} is constant")]
    ConstantPolynomial(usize),
    #[error("polynomial system is empty")]
    EmptySystem,
}

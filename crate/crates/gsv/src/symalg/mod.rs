//! Exact arithmetic kernel: arbitrary-precision rationals, sparse
//! multivariate polynomials in the matrix entries, and localized fractions
//! whose denominators are products of chart-minor powers.
//!
//! Everything is exact; no floating point enters any certification path.

mod localized;
mod minors;
mod monomial;
mod parse;
mod polynomial;
mod variable;

pub use localized::LocalizedElement;
pub use minors::{factor_minor_product, minor_poly, IndexSet};
pub use monomial::Monomial;
pub use parse::{format_poly, parse_poly};
pub use polynomial::Polynomial;
pub use variable::{VarKind, Variable};

/// Exact rational scalars. `num_rational::BigRational` already maintains the
/// reduced-fraction, positive-denominator invariants we need.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymAlgError {
    /// Exact division was asked for a non-multiple; inside fraction-free
    /// elimination this indicates an internal bug.
    #[error("exact division left a nonzero remainder")]
    NotDivisible,
    /// A division result would have a denominator outside the localized ring.
    #[error("denominator is not a rational multiple of a product of chart minors")]
    NonMinorDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator minor {0} vanishes at the evaluation point")]
    DenominatorVanishes(IndexSet),
    #[error("index sets must be nonempty, 1-based and duplicate-free")]
    InvalidIndexSet,
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
}

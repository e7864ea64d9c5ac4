//! Exact coefficient fields, monomials, monomial orders and multivariate
//! polynomial arithmetic.

mod field;
mod monomial;
mod parse;
mod poly;

pub use field::{
    is_canonical_rational, is_prime, rat, smallest_prime_congruent_one, Field, FieldSpec,
    PrimeField, Rationals, MAX_PRIME,
};
pub use monomial::{compare_monomials, Monomial, MonomialOrder};
pub use parse::{format_poly, parse_poly};
pub use poly::{poly_arith, poly_scale, ArithOp, PolyRing, Polynomial};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("coefficient field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("monomial order mismatch")]
    OrderMismatch,
    #[error("operation needs a nonzero polynomial")]
    EmptyPolynomial,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("denominator is zero in the coefficient field")]
    ZeroDenominator,
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable x{index} at offset {pos} is out of range (1..={nvars})")]
    VariableOutOfRange {
        pos: usize,
        index: usize,
        nvars: usize,
    },
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("unknown field '{0}' (expected 'rational' or 'gf:P')")]
    BadFieldSpec(String),
    #[error("unknown monomial order '{0}' (expected lex, grlex or grevlex)")]
    BadOrder(String),
}

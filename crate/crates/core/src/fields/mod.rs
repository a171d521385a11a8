//! Exact arithmetic over GF(p), the rationals and real quadratic fields
//! Q(sqrt d), with exact matrix rank and affine solving.
//!
//! No floating-point path exists: every value is a canonical residue or a
//! reduced fraction (pair of fractions for Q(sqrt d)).

mod bareiss;
mod elem;
pub mod gfp;
pub mod json;
mod matrix;
mod solve;

use thiserror::Error;

pub use elem::{
    is_prime, is_square_free, normalize_elem, FieldElem, FieldSpec, RawElem, MAX_PRIME,
};
pub use matrix::{determinant, matrix_rank, rank_factorization, rref, ConcreteMatrix};
pub use solve::{solve_affine, AffineSolutionSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("{0} is not a square-free integer >= 2")]
    NotSquareFree(u64),
    #[error("unknown field {0:?} (expected gf<p>, q or qsqrt<d>)")]
    BadFieldFlag(String),
    #[error("value not in field: {0}")]
    NotInField(String),
    #[error("non-canonical encoding: {0}")]
    NonCanonical(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("malformed JSON: {0}")]
    Json(String),
}

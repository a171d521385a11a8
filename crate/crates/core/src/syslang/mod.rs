//! The input language: polynomial equations, their reduction to quadratic
//! systems, and the structural normal form the matrix construction needs.

mod eval;
mod normalize;
mod parse;
mod poly;
mod quadratize;
mod system;

use thiserror::Error;

use crate::budget::BudgetExceeded;
use crate::fields::FieldSpec;

pub use eval::{eval_system, solve_bruteforce};
pub use normalize::{check_assumptions, normalize, normalize_only, Assumption, Violation};
pub use parse::{parse_source, ParseError, ParseErrorKind, MAX_EXPONENT};
pub use poly::{mono_degree, Monomial, PolyFormula, Polynomial};
pub use quadratize::quadratize;
pub use system::{
    read_assignment, read_system, write_assignment, write_system, Assignment, Equation,
    QuadraticSystem,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SysError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("no value for variable {0:?}")]
    MissingVariable(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("{0} is not a prime field")]
    NotPrimeField(FieldSpec),
    #[error("{0}")]
    Budget(#[from] BudgetExceeded),
    #[error("malformed system: {0}")]
    Malformed(String),
}

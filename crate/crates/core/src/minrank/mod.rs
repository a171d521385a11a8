//! The block matrix of a quadratic system and its minimum rank.
//!
//! Each equation contributes a 3x3 diagonal block whose determinant is the
//! equation's defect. A variable `u` occurring in rows `R_u` and columns
//! `C_u` also gets the entry `u - u_j` at `(R_u[j], C_u[k])` for all `j != k`,
//! where the `u_j` (named `u~j`) are fresh copies. For systems satisfying
//! A1 to A3, the system is solvable exactly when some assignment brings the
//! rank down to `2m`.

mod affine;
mod matrix;
mod search;

use num_bigint::BigInt;
use thiserror::Error;

use crate::budget::BudgetExceeded;
use crate::fields::FieldSpec;
use crate::syslang::{Equation, Polynomial, SysError, Violation};

pub use affine::AffineExpr;
pub use matrix::{
    build_block, build_matrix, copy_name, evaluate_matrix, read_symbolic, verify_observation,
    write_symbolic, CopyVar, Occurrence, SymbolicMatrix,
};
pub use search::{
    bordered_submatrix, diagonal_block, minrank_bruteforce, minrank_witness_search, MinrankResult,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MinrankError {
    #[error("assumptions violated: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Assumptions(Vec<Violation>),
    #[error("no value for variable {0:?}")]
    MissingVariable(String),
    #[error("{0} is not a prime field")]
    NotPrimeField(FieldSpec),
    #[error("{0}")]
    Budget(#[from] BudgetExceeded),
    #[error("malformed matrix: {0}")]
    Malformed(String),
}

impl From<SysError> for MinrankError {
    fn from(e: SysError) -> Self {
        match e {
            SysError::MissingVariable(v) => MinrankError::MissingVariable(v),
            SysError::NotPrimeField(f) => MinrankError::NotPrimeField(f),
            SysError::Budget(b) => MinrankError::Budget(b),
            other => MinrankError::Malformed(other.to_string()),
        }
    }
}

fn to_poly(e: &AffineExpr, names: &[String]) -> Polynomial {
    let mut p = Polynomial::constant(e.constant_part().clone());
    for (v, c) in e.terms() {
        let i = names
            .iter()
            .position(|n| n == v)
            .expect("variable of the system");
        p = p.add(&Polynomial::constant(c.clone()).mul(&Polynomial::var(i)));
    }
    p
}

/// Determinant of a block as a polynomial over the system's variables.
pub fn block_determinant(block: &[[AffineExpr; 3]; 3], names: &[String]) -> Polynomial {
    let g = |i: usize, j: usize| to_poly(&block[i][j], names);
    let minor = |c0: usize, c1: usize| g(1, c0).mul(&g(2, c1)).sub(&g(1, c1).mul(&g(2, c0)));
    g(0, 0)
        .mul(&minor(1, 2))
        .sub(&g(0, 1).mul(&minor(0, 2)))
        .add(&g(0, 2).mul(&minor(0, 1)))
}

/// `c - (a + b)`, `c - ab`, `c - a` or `c - K` for the respective kinds.
pub fn equation_defect(e: &Equation) -> Polynomial {
    let v = Polynomial::var;
    match e {
        Equation::Add { c, a, b } => v(*c).sub(&v(*a)).sub(&v(*b)),
        Equation::Mul { c, a, b } => v(*c).sub(&v(*a).mul(&v(*b))),
        Equation::Copy { c, a } => v(*c).sub(&v(*a)),
        Equation::Const { c, k } => v(*c).sub(&Polynomial::constant(BigInt::clone(k))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syslang::QuadraticSystem;

    #[test]
    fn block_determinant_is_defect() {
        let s = QuadraticSystem::from_named(&[
            ("ADD", vec!["c", "a", "b"], None),
            ("MUL", vec!["c", "a", "b"], None),
            ("COPY", vec!["c", "a"], None),
            ("CONST", vec!["c"], Some(-7)),
        ])
        .unwrap();
        for e in &s.equations {
            assert_eq!(
                block_determinant(&build_block(e, &s.variables), &s.variables),
                equation_defect(e)
            );
        }
    }
}

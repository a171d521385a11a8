#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use tenrank_core::fields::{ConcreteMatrix, FieldElem, FieldSpec};
use tenrank_core::syslang::QuadraticSystem;
use tenrank_core::tensorize::Tensor;
use tenrank_oracle::OEq;

pub const EXAMPLE: &str = "eq u = x*y; eq y = x; eq u = 2;";

pub fn var_name(i: usize) -> String {
    format!("x{i}")
}

/// The oracle's system as a library system over variables `x0, x1, ...`.
pub fn to_system(eqs: &[OEq]) -> QuadraticSystem {
    let names: Vec<Vec<String>> = eqs
        .iter()
        .map(|e| e.slots().into_iter().map(var_name).collect())
        .collect();
    let named: Vec<(&str, Vec<&str>, Option<i64>)> = eqs
        .iter()
        .zip(&names)
        .map(|(e, ns)| {
            (
                e.kind(),
                ns.iter().map(|s| s.as_str()).collect(),
                e.constant(),
            )
        })
        .collect();
    QuadraticSystem::from_named(&named).expect("valid system")
}

pub fn residue(e: &FieldElem) -> u64 {
    match e {
        FieldElem::Residue(r) => *r,
        other => panic!("not a residue: {other:?}"),
    }
}

pub fn to_rows(m: &ConcreteMatrix) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(residue).collect())
        .collect()
}

pub fn tensor_residues(t: &Tensor) -> Vec<u64> {
    t.entries().iter().map(residue).collect()
}

pub fn random_elem<R: Rng>(rng: &mut R, field: &FieldSpec) -> FieldElem {
    match field {
        FieldSpec::Prime(p) => FieldElem::Residue(rng.gen_range(0..*p)),
        FieldSpec::Rationals => {
            let num = BigInt::from(rng.gen_range(-4i64..=4));
            let den = BigInt::from(rng.gen_range(1i64..=3));
            FieldElem::Rational(BigRational::new(num, den))
        }
        FieldSpec::Quadratic(_) => {
            let a = BigRational::new(
                BigInt::from(rng.gen_range(-3i64..=3)),
                BigInt::from(rng.gen_range(1i64..=2)),
            );
            let b = BigRational::new(
                BigInt::from(rng.gen_range(-2i64..=2)),
                BigInt::from(rng.gen_range(1i64..=2)),
            );
            FieldElem::Quadratic(a, b)
        }
    }
}

/// A random matrix whose rank is often below full: entries are zero with
/// probability `zero_bias`.
pub fn random_matrix<R: Rng>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    field: &FieldSpec,
    zero_bias: f64,
) -> ConcreteMatrix {
    ConcreteMatrix::from_fn(rows, cols, |_, _| {
        if rng.gen_bool(zero_bias) {
            field.zero()
        } else {
            random_elem(rng, field)
        }
    })
}

pub fn random_vec<R: Rng>(rng: &mut R, len: usize, field: &FieldSpec) -> Vec<FieldElem> {
    (0..len).map(|_| random_elem(rng, field)).collect()
}

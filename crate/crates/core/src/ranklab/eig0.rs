//! Eigenvalue zero of a cubical tensor: a nonzero `x` with
//! `sum_ij t_ijk x_i x_j = 0` for every `k`, which is a homogeneous
//! quadratic system in `x`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::RankError;
use crate::budget::BudgetExceeded;
use crate::fields::{FieldElem, FieldSpec};
use crate::tensorize::Tensor;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eig0Result {
    /// The least normalized eigenvector for eigenvalue 0, if any.
    pub eigenvector: Option<Vec<FieldElem>>,
}

impl Eig0Result {
    pub fn has_zero_eigenvalue(&self) -> bool {
        self.eigenvector.is_some()
    }
}

/// A homogeneous quadratic form `sum c * x_i * x_j` over `n` variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuadraticForm {
    pub terms: Vec<(usize, usize, BigInt)>,
}

impl QuadraticForm {
    pub fn new(terms: Vec<(usize, usize, i64)>) -> Self {
        QuadraticForm {
            terms: terms
                .into_iter()
                .map(|(i, j, c)| (i, j, BigInt::from(c)))
                .collect(),
        }
    }

    /// Coefficient of `x_i x_j` with `i <= j`, merging both orders.
    pub fn coefficient(&self, i: usize, j: usize) -> BigInt {
        let (i, j) = (i.min(j), i.max(j));
        self.terms
            .iter()
            .filter(|(a, b, _)| (*a).min(*b) == i && (*a).max(*b) == j)
            .fold(BigInt::zero(), |acc, (_, _, c)| acc + c)
    }

    pub fn eval(&self, x: &[FieldElem], field: &FieldSpec) -> FieldElem {
        self.terms.iter().fold(field.zero(), |acc, (i, j, c)| {
            field.add(
                &acc,
                &field.mul(&field.from_int(c), &field.mul(&x[*i], &x[*j])),
            )
        })
    }
}

/// Whether cross coefficients can be split evenly over `(i, j)` and `(j, i)`.
pub fn splits_evenly(field: &FieldSpec) -> bool {
    field.characteristic() != 2
}

/// The `n x n x n` tensor whose `k`-th frontal slice holds the coefficients
/// of form `k` (missing forms give zero slices). Cross coefficients are split
/// in half between `(i, j)` and `(j, i)`; in characteristic 2 the whole
/// coefficient goes to `(i, j)` with `i < j`.
pub fn tensor_from_homogeneous(
    forms: &[QuadraticForm],
    n: usize,
    field: &FieldSpec,
) -> Result<Tensor, RankError> {
    if forms.len() > n {
        return Err(RankError::Dims(format!(
            "{} forms for {n} variables",
            forms.len()
        )));
    }
    if let Some((i, j, _)) = forms
        .iter()
        .flat_map(|f| f.terms.iter())
        .find(|(i, j, _)| *i >= n || *j >= n)
    {
        return Err(RankError::Dims(format!(
            "variable index {} out of range",
            (*i).max(*j)
        )));
    }
    let half = if splits_evenly(field) {
        field.inv(&field.from_i64(2))
    } else {
        None
    };
    let mut t = Tensor::zeros([n, n, n], field);
    for (k, form) in forms.iter().enumerate() {
        for i in 0..n {
            for j in i..n {
                let c = field.from_int(&form.coefficient(i, j));
                if field.is_zero(&c) {
                    continue;
                }
                if i == j {
                    t.set(i, i, k, c);
                } else if let Some(h) = &half {
                    let part = field.mul(&c, h);
                    t.set(i, j, k, part.clone());
                    t.set(j, i, k, part);
                } else {
                    t.set(i, j, k, c);
                }
            }
        }
    }
    Ok(t)
}

/// Searches normalized nonzero vectors (leading coordinate 1, ordered by its
/// position and then lexicographically) for an eigenvector of eigenvalue 0.
pub fn eig0(t: &Tensor, budget: u64) -> Result<Eig0Result, RankError> {
    let field = t.field().clone();
    let FieldSpec::Prime(p) = field else {
        return Err(RankError::NotPrimeField(field));
    };
    let [n, n2, n3] = t.dims();
    if n != n2 || n != n3 {
        return Err(RankError::NotCubical(t.dims()));
    }
    let count = (0..n).try_fold(0u64, |acc, lead| {
        crate::budget::space_size(p, n - lead - 1).and_then(|s| acc.checked_add(s))
    });
    match count {
        Some(c) if c <= budget => {}
        _ => {
            return Err(RankError::Budget(BudgetExceeded {
                what: format!("({p}^{n} - 1) / ({p} - 1)"),
                budget,
            }))
        }
    }
    let coeff: Vec<u64> = t
        .entries()
        .iter()
        .map(|e| match e {
            FieldElem::Residue(r) => *r,
            _ => unreachable!(),
        })
        .collect();
    let holds = |x: &[u64]| {
        (0..n).all(|k| {
            let mut acc = 0u64;
            for i in 0..n {
                if x[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    acc = (acc + coeff[(i * n + j) * n + k] * (x[i] * x[j] % p)) % p;
                }
            }
            acc == 0
        })
    };
    for lead in 0..n {
        let mut x = vec![0u64; n];
        x[lead] = 1;
        loop {
            if holds(&x) {
                return Ok(Eig0Result {
                    eigenvector: Some(x.into_iter().map(FieldElem::Residue).collect()),
                });
            }
            let mut i = n;
            loop {
                if i == lead + 1 {
                    break;
                }
                i -= 1;
                x[i] += 1;
                if x[i] < p {
                    break;
                }
                x[i] = 0;
            }
            if (lead + 1..n).all(|i| x[i] == 0) {
                break;
            }
        }
    }
    Ok(Eig0Result { eigenvector: None })
}

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::tensor::{tensor_digest, Tensor};
use super::TensorError;
use crate::fields::json::{vec_from_json, vec_to_json};
use crate::fields::{ConcreteMatrix, FieldElem, FieldSpec};

/// `u (x) v (x) w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneTerm {
    pub u: Vec<FieldElem>,
    pub v: Vec<FieldElem>,
    pub w: Vec<FieldElem>,
}

impl RankOneTerm {
    pub fn tensor(&self, field: &FieldSpec) -> Tensor {
        Tensor::outer(&self.u, &self.v, &self.w, field)
    }

    /// The matrix part `u v^T`.
    pub fn matrix(&self, field: &FieldSpec) -> ConcreteMatrix {
        ConcreteMatrix::outer(&self.u, &self.v, field)
    }
}

/// A list of rank-one terms claimed to sum to a target tensor.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expansion {
    pub terms: Vec<RankOneTerm>,
}

impl Expansion {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sum(&self, dims: [usize; 3], field: &FieldSpec) -> Tensor {
        let mut acc = Tensor::zeros(dims, field);
        for t in &self.terms {
            for i in 0..dims[0] {
                if field.is_zero(&t.u[i]) {
                    continue;
                }
                for j in 0..dims[1] {
                    let uv = field.mul(&t.u[i], &t.v[j]);
                    if field.is_zero(&uv) {
                        continue;
                    }
                    for k in 0..dims[2] {
                        let x = field.add(acc.get(i, j, k), &field.mul(&uv, &t.w[k]));
                        acc.set(i, j, k, x);
                    }
                }
            }
        }
        acc
    }
}

/// Whether the terms sum to `t` exactly.
pub fn verify_expansion(t: &Tensor, e: &Expansion) -> Result<bool, TensorError> {
    let [d1, d2, d3] = t.dims();
    for (n, term) in e.terms.iter().enumerate() {
        if term.u.len() != d1 || term.v.len() != d2 || term.w.len() != d3 {
            return Err(TensorError::Dims(format!(
                "term {} has shape {}x{}x{}, tensor is {d1}x{d2}x{d3}",
                n + 1,
                term.u.len(),
                term.v.len(),
                term.w.len()
            )));
        }
    }
    Ok(e.sum(t.dims(), t.field()) == *t)
}

/// Factors a matrix of rank at most one as `u v^T`: `u` is the first nonzero
/// column and `v` is scaled so that `v` is 1 at that column. Returns `None`
/// for the zero matrix.
pub fn factor_rank_one(
    m: &ConcreteMatrix,
    field: &FieldSpec,
) -> Result<Option<(Vec<FieldElem>, Vec<FieldElem>)>, TensorError> {
    let Some(j0) = (0..m.cols()).find(|&j| (0..m.rows()).any(|i| !field.is_zero(m.get(i, j))))
    else {
        return Ok(None);
    };
    let u = m.column(j0);
    let i0 = (0..m.rows())
        .find(|&i| !field.is_zero(&u[i]))
        .expect("nonzero column");
    let pivot = m.get(i0, j0).clone();
    let v: Vec<FieldElem> = (0..m.cols())
        .map(|j| field.div(m.get(i0, j), &pivot).expect("nonzero pivot"))
        .collect();
    if ConcreteMatrix::outer(&u, &v, field) != *m {
        return Err(TensorError::NotRankOne);
    }
    Ok(Some((u, v)))
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    u: Vec<Value>,
    v: Vec<Value>,
    w: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
struct ExpansionJson {
    field: FieldSpec,
    dims: [usize; 3],
    target_digest: String,
    terms: Vec<TermJson>,
}

/// Serializes `e` together with the digest of the tensor it expands.
pub fn write_expansion(e: &Expansion, target: &Tensor) -> String {
    let j = ExpansionJson {
        field: target.field().clone(),
        dims: target.dims(),
        target_digest: tensor_digest(target),
        terms: e
            .terms
            .iter()
            .map(|t| TermJson {
                u: vec_to_json(&t.u),
                v: vec_to_json(&t.v),
                w: vec_to_json(&t.w),
            })
            .collect(),
    };
    serde_json::to_string(&j).expect("expansion serializes")
}

/// An expansion file as read: the terms plus the recorded target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionFile {
    pub expansion: Expansion,
    pub field: FieldSpec,
    pub dims: [usize; 3],
    pub target_digest: String,
}

pub fn read_expansion(text: &str) -> Result<ExpansionFile, TensorError> {
    let j: ExpansionJson =
        serde_json::from_str(text).map_err(|e| TensorError::Malformed(e.to_string()))?;
    let conv = |v: &[Value], len: usize| -> Result<Vec<FieldElem>, TensorError> {
        if v.len() != len {
            return Err(TensorError::Dims(format!(
                "vector of length {} where {len} expected",
                v.len()
            )));
        }
        vec_from_json(v, &j.field).map_err(|e| TensorError::Malformed(e.to_string()))
    };
    let [d1, d2, d3] = j.dims;
    let terms = j
        .terms
        .iter()
        .map(|t| {
            Ok(RankOneTerm {
                u: conv(&t.u, d1)?,
                v: conv(&t.v, d2)?,
                w: conv(&t.w, d3)?,
            })
        })
        .collect::<Result<Vec<_>, TensorError>>()?;
    Ok(ExpansionFile {
        expansion: Expansion { terms },
        field: j.field,
        dims: j.dims,
        target_digest: j.target_digest,
    })
}

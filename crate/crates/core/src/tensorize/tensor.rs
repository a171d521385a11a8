use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::TensorError;
use crate::fields::json::{vec_from_json, vec_to_json};
use crate::fields::{ConcreteMatrix, FieldElem, FieldSpec};

/// Dense three-way array; entry `(i, j, k)` lives at `i*d2*d3 + j*d3 + k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    dims: [usize; 3],
    field: FieldSpec,
    entries: Vec<FieldElem>,
}

impl Tensor {
    pub fn new(
        dims: [usize; 3],
        field: FieldSpec,
        entries: Vec<FieldElem>,
    ) -> Result<Self, TensorError> {
        let want = dims[0] * dims[1] * dims[2];
        if entries.len() != want {
            return Err(TensorError::Dims(format!(
                "{} entries for dims {dims:?}",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| !field.contains(e)) {
            return Err(TensorError::Malformed(format!(
                "entry {e} is not in {field}"
            )));
        }
        Ok(Tensor {
            dims,
            field,
            entries,
        })
    }

    pub fn zeros(dims: [usize; 3], field: &FieldSpec) -> Self {
        Tensor {
            dims,
            field: field.clone(),
            entries: vec![field.zero(); dims[0] * dims[1] * dims[2]],
        }
    }

    pub fn from_fn(
        dims: [usize; 3],
        field: &FieldSpec,
        mut f: impl FnMut(usize, usize, usize) -> FieldElem,
    ) -> Self {
        let mut entries = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    entries.push(f(i, j, k));
                }
            }
        }
        Tensor {
            dims,
            field: field.clone(),
            entries,
        }
    }

    /// Stacks equally sized matrices as frontal slices.
    pub fn from_frontal_slices(
        rows: usize,
        cols: usize,
        slices: &[ConcreteMatrix],
        field: &FieldSpec,
    ) -> Self {
        assert!(slices.iter().all(|s| s.rows() == rows && s.cols() == cols));
        Tensor::from_fn([rows, cols, slices.len()], field, |i, j, k| {
            slices[k].get(i, j).clone()
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &FieldElem {
        &self.entries[self.offset(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: FieldElem) {
        let o = self.offset(i, j, k);
        self.entries[o] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.dims, other.dims);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.add(a, b))
            .collect();
        Tensor {
            dims: self.dims,
            field: self.field.clone(),
            entries,
        }
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.dims, other.dims);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.field.sub(a, b))
            .collect();
        Tensor {
            dims: self.dims,
            field: self.field.clone(),
            entries,
        }
    }

    /// `u (x) v (x) w`.
    pub fn outer(u: &[FieldElem], v: &[FieldElem], w: &[FieldElem], field: &FieldSpec) -> Tensor {
        Tensor::from_fn([u.len(), v.len(), w.len()], field, |i, j, k| {
            field.mul(&field.mul(&u[i], &v[j]), &w[k])
        })
    }
}

/// A two-dimensional section of `t` at `index` (0-based) along `mode`:
/// mode 1 fixes `i` (a `d2 x d3` matrix), mode 2 fixes `j` (`d1 x d3`) and
/// mode 3 fixes `k`, giving the frontal slice (`d1 x d2`).
pub fn slice(t: &Tensor, mode: usize, index: usize) -> Result<ConcreteMatrix, TensorError> {
    let [d1, d2, d3] = t.dims;
    let extent = match mode {
        1 => d1,
        2 => d2,
        3 => d3,
        _ => return Err(TensorError::OutOfRange(format!("mode {mode}"))),
    };
    if index >= extent {
        return Err(TensorError::OutOfRange(format!(
            "index {index} in mode {mode} of extent {extent}"
        )));
    }
    Ok(match mode {
        1 => ConcreteMatrix::from_fn(d2, d3, |j, k| t.get(index, j, k).clone()),
        2 => ConcreteMatrix::from_fn(d1, d3, |i, k| t.get(i, index, k).clone()),
        _ => ConcreteMatrix::from_fn(d1, d2, |i, j| t.get(i, j, index).clone()),
    })
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    dims: [usize; 3],
    field: FieldSpec,
    entries: Vec<Value>,
}

pub fn write_tensor(t: &Tensor) -> String {
    let j = TensorJson {
        dims: t.dims,
        field: t.field.clone(),
        entries: vec_to_json(&t.entries),
    };
    serde_json::to_string(&j).expect("tensor serializes")
}

pub fn read_tensor(text: &str) -> Result<Tensor, TensorError> {
    let j: TensorJson =
        serde_json::from_str(text).map_err(|e| TensorError::Malformed(e.to_string()))?;
    let entries =
        vec_from_json(&j.entries, &j.field).map_err(|e| TensorError::Malformed(e.to_string()))?;
    Tensor::new(j.dims, j.field, entries)
}

/// SHA-256 of the canonical serialization, in hex.
pub fn tensor_digest(t: &Tensor) -> String {
    hex::encode(Sha256::digest(write_tensor(t).as_bytes()))
}

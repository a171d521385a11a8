use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::RankError;
use crate::fields::json::{matrix_from_json, matrix_to_json};
use crate::fields::{
    matrix_rank, solve_affine, AffineSolutionSpace, ConcreteMatrix, FieldElem, FieldSpec,
};
use crate::tensorize::{Expansion, RankOneTerm, Tensor};

/// A list of matrices of rank at most one, all of the same shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceFamily {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    matrices: Vec<ConcreteMatrix>,
}

impl SliceFamily {
    pub fn new(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        matrices: Vec<ConcreteMatrix>,
    ) -> Result<Self, RankError> {
        for (i, m) in matrices.iter().enumerate() {
            if m.rows() != rows || m.cols() != cols {
                return Err(RankError::Dims(format!(
                    "member {} is {}x{}, expected {rows}x{cols}",
                    i + 1,
                    m.rows(),
                    m.cols()
                )));
            }
            if m.entries().iter().any(|e| !field.contains(e)) {
                return Err(RankError::Dims(format!(
                    "member {} is not over {field}",
                    i + 1
                )));
            }
            if matrix_rank(m, &field) > 1 {
                return Err(RankError::NotRankOne(i));
            }
        }
        Ok(SliceFamily {
            field,
            rows,
            cols,
            matrices,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn matrices(&self) -> &[ConcreteMatrix] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    matrices: Vec<Value>,
}

pub fn write_family(s: &SliceFamily) -> String {
    let j = FamilyJson {
        field: s.field.clone(),
        rows: s.rows,
        cols: s.cols,
        matrices: s
            .matrices
            .iter()
            .map(|m| matrix_to_json(m, &s.field))
            .collect(),
    };
    serde_json::to_string(&j).expect("family serializes")
}

/// Reads a family, rejecting members of rank two or more.
pub fn read_family(text: &str) -> Result<SliceFamily, RankError> {
    let j: FamilyJson =
        serde_json::from_str(text).map_err(|e| RankError::Malformed(e.to_string()))?;
    let mut ms = Vec::with_capacity(j.matrices.len());
    for v in &j.matrices {
        let (m, f) = matrix_from_json(v).map_err(|e| RankError::Malformed(e.to_string()))?;
        if f != j.field {
            return Err(RankError::Malformed(format!(
                "member over {f} in a family over {}",
                j.field
            )));
        }
        ms.push(m);
    }
    SliceFamily::new(j.field, j.rows, j.cols, ms)
}

/// All `(w_1, ..., w_r)` with `T = sum_l S_l (x) w_l`, as one affine space
/// over `r * d3` unknowns; `w_l` occupies coordinates `l*d3 .. (l+1)*d3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationSpace {
    pub r: usize,
    pub d3: usize,
    pub space: AffineSolutionSpace,
}

impl RealizationSpace {
    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    /// Splits a point into its `r` third-mode vectors.
    pub fn split(&self, x: &[FieldElem]) -> Vec<Vec<FieldElem>> {
        x.chunks(self.d3.max(1))
            .take(self.r)
            .map(|c| c.to_vec())
            .collect()
    }

    /// Concatenates third-mode vectors into a point.
    pub fn join(ws: &[Vec<FieldElem>]) -> Vec<FieldElem> {
        ws.iter().flatten().cloned().collect()
    }
}

/// Solves `t_ijk = sum_l (S_l)_ij w_l(k)` for the `w_l`.
pub fn realization_space(
    t: &Tensor,
    s: &SliceFamily,
    r: usize,
    field: &FieldSpec,
) -> Result<RealizationSpace, RankError> {
    let [d1, d2, d3] = t.dims();
    if s.len() != r {
        return Err(RankError::Dims(format!(
            "family of {} matrices for r = {r}",
            s.len()
        )));
    }
    if s.shape() != (d1, d2) {
        return Err(RankError::Dims(format!(
            "family is {:?}, tensor slices are {d1}x{d2}",
            s.shape()
        )));
    }
    if t.field() != field || s.field() != field {
        return Err(RankError::Dims(format!(
            "field mismatch: tensor over {}, family over {}, requested {field}",
            t.field(),
            s.field()
        )));
    }
    let unknowns = r * d3;
    let eqs = d1 * d2 * d3;
    let mut coeffs = ConcreteMatrix::zeros(eqs, unknowns, field);
    let mut rhs = Vec::with_capacity(eqs);
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d3 {
                let row = (i * d2 + j) * d3 + k;
                for (l, m) in s.matrices().iter().enumerate() {
                    coeffs.set(row, l * d3 + k, m.get(i, j).clone());
                }
                rhs.push(t.get(i, j, k).clone());
            }
        }
    }
    let space = solve_affine(&coeffs, &rhs, field)?;
    Ok(RealizationSpace { r, d3, space })
}

/// The expansion `sum_l S_l (x) w_l` for a point of the space, with each
/// member factored by its first nonzero column.
pub fn expansion_from_point(
    s: &SliceFamily,
    rs: &RealizationSpace,
    x: &[FieldElem],
) -> Result<Expansion, RankError> {
    let field = s.field();
    let mut terms = Vec::new();
    for (m, w) in s.matrices().iter().zip(rs.split(x)) {
        match crate::tensorize::factor_rank_one(m, field)? {
            Some((u, v)) => terms.push(RankOneTerm { u, v, w }),
            None => terms.push(RankOneTerm {
                u: vec![field.zero(); s.rows],
                v: vec![field.zero(); s.cols],
                w,
            }),
        }
    }
    Ok(Expansion { terms })
}

use super::matrix::{matrix_rank, rref};
use super::{ConcreteMatrix, FieldElem, FieldError, FieldSpec};

/// The full solution set of a linear system: empty, or a particular point
/// plus a basis of the homogeneous solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolutionSpace {
    pub ambient_dim: usize,
    pub particular: Option<Vec<FieldElem>>,
    pub basis: Vec<Vec<FieldElem>>,
}

impl AffineSolutionSpace {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    /// Dimension of the solution set (`None` when empty).
    pub fn dim(&self) -> Option<usize> {
        self.particular.as_ref().map(|_| self.basis.len())
    }

    /// `particular + sum_i coeffs[i] * basis[i]`.
    pub fn point(&self, coeffs: &[FieldElem], field: &FieldSpec) -> Option<Vec<FieldElem>> {
        let mut x = self.particular.clone()?;
        assert_eq!(coeffs.len(), self.basis.len());
        for (c, b) in coeffs.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi = field.add(xi, &field.mul(c, bi));
            }
        }
        Some(x)
    }

    /// Membership test by span comparison against the basis.
    pub fn contains(&self, x: &[FieldElem], field: &FieldSpec) -> bool {
        let Some(p) = &self.particular else {
            return false;
        };
        if x.len() != self.ambient_dim {
            return false;
        }
        let diff: Vec<FieldElem> = x.iter().zip(p).map(|(a, b)| field.sub(a, b)).collect();
        if diff.iter().all(|e| field.is_zero(e)) {
            return true;
        }
        let mut rows: Vec<FieldElem> = self.basis.iter().flatten().cloned().collect();
        let k = self.basis.len();
        let before = if k == 0 {
            0
        } else {
            let m = ConcreteMatrix::new(k, self.ambient_dim, rows.clone()).expect("shape");
            matrix_rank(&m, field)
        };
        rows.extend(diff);
        let m = ConcreteMatrix::new(k + 1, self.ambient_dim, rows).expect("shape");
        matrix_rank(&m, field) == before
    }
}

/// Solves `coeffs * x = rhs` exactly.
pub fn solve_affine(
    coeffs: &ConcreteMatrix,
    rhs: &[FieldElem],
    field: &FieldSpec,
) -> Result<AffineSolutionSpace, FieldError> {
    let (rows, cols) = (coeffs.rows(), coeffs.cols());
    if rhs.len() != rows {
        return Err(FieldError::Shape(format!(
            "right-hand side of length {} for {rows} equations",
            rhs.len()
        )));
    }
    let augmented = ConcreteMatrix::from_fn(rows, cols + 1, |i, j| {
        if j < cols {
            coeffs.get(i, j).clone()
        } else {
            rhs[i].clone()
        }
    });
    let (r, pivots) = rref(&augmented, field);
    if pivots.last() == Some(&cols) {
        return Ok(AffineSolutionSpace {
            ambient_dim: cols,
            particular: None,
            basis: Vec::new(),
        });
    }
    let mut particular = vec![field.zero(); cols];
    for (i, &pc) in pivots.iter().enumerate() {
        particular[pc] = r.get(i, cols).clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); cols];
            v[fc] = field.one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(r.get(i, fc));
            }
            v
        })
        .collect();
    Ok(AffineSolutionSpace {
        ambient_dim: cols,
        particular: Some(particular),
        basis,
    })
}

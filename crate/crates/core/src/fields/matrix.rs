use num_rational::BigRational;

use super::bareiss::{self, QuadInt};
use super::{gfp, FieldElem, FieldError, FieldSpec};

/// A dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConcreteMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
}

impl ConcreteMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<FieldElem>) -> Result<Self, FieldError> {
        if entries.len() != rows * cols {
            return Err(FieldError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ConcreteMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize, field: &FieldSpec) -> Self {
        ConcreteMatrix {
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: &FieldSpec) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElem) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ConcreteMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// Integer matrix mapped into `field`.
    pub fn from_i64(rows: usize, cols: usize, vals: &[i64], field: &FieldSpec) -> Self {
        assert_eq!(vals.len(), rows * cols);
        ConcreteMatrix {
            rows,
            cols,
            entries: vals.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<FieldElem> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self, field: &FieldSpec) -> bool {
        self.entries.iter().all(|e| field.is_zero(e))
    }

    /// Submatrix on the given row and column index lists, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn map(&self, mut f: impl FnMut(&FieldElem) -> FieldElem) -> Self {
        ConcreteMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(&mut f).collect(),
        }
    }

    pub fn add(&self, other: &Self, field: &FieldSpec) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ConcreteMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: &FieldElem, field: &FieldSpec) -> Self {
        self.map(|e| field.mul(e, s))
    }

    /// The outer product `u v^T`.
    pub fn outer(u: &[FieldElem], v: &[FieldElem], field: &FieldSpec) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| field.mul(&u[i], &v[j]))
    }

    pub fn mul(&self, other: &Self, field: &FieldSpec) -> Self {
        assert_eq!(self.cols, other.rows);
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(field.zero(), |acc, k| {
                field.add(&acc, &field.mul(self.get(i, k), other.get(k, j)))
            })
        })
    }

    fn residues(&self) -> Vec<u64> {
        self.entries
            .iter()
            .map(|e| match e {
                FieldElem::Residue(r) => *r,
                other => panic!("{other:?} is not a residue"),
            })
            .collect()
    }
}

/// Rank over `field` by exact elimination (fraction-free over Q and Q(sqrt d)).
pub fn matrix_rank(m: &ConcreteMatrix, field: &FieldSpec) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    match field {
        FieldSpec::Prime(p) => gfp::rank_in_place(&mut m.residues(), m.rows, m.cols, *p),
        FieldSpec::Rationals => {
            let qs: Vec<BigRational> = m
                .entries
                .iter()
                .map(|e| match e {
                    FieldElem::Rational(q) => q.clone(),
                    other => panic!("{other:?} is not rational"),
                })
                .collect();
            bareiss::rank(
                &mut bareiss::integer_rows(&qs, m.rows, m.cols),
                m.rows,
                m.cols,
            )
        }
        FieldSpec::Quadratic(d) => {
            let qs: Vec<(BigRational, BigRational)> = m
                .entries
                .iter()
                .map(|e| match e {
                    FieldElem::Quadratic(a, b) => (a.clone(), b.clone()),
                    other => panic!("{other:?} is not in a quadratic field"),
                })
                .collect();
            let mut ints: Vec<QuadInt> = bareiss::quad_integer_rows(&qs, m.rows, m.cols, *d);
            bareiss::rank(&mut ints, m.rows, m.cols)
        }
    }
}

/// Determinant of a square matrix.
pub fn determinant(m: &ConcreteMatrix, field: &FieldSpec) -> FieldElem {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    if let FieldSpec::Prime(p) = field {
        return FieldElem::Residue(gfp::det_in_place(&mut m.residues(), m.rows, *p));
    }
    let n = m.rows;
    let mut a = m.entries.clone();
    let mut det = field.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !field.is_zero(&a[r * n + col])) else {
            return field.zero();
        };
        if piv != col {
            for c in 0..n {
                a.swap(piv * n + c, col * n + c);
            }
            det = field.neg(&det);
        }
        let d = a[col * n + col].clone();
        det = field.mul(&det, &d);
        let inv = field.inv(&d).expect("nonzero pivot");
        for r in col + 1..n {
            let f = field.mul(&a[r * n + col], &inv);
            if field.is_zero(&f) {
                continue;
            }
            for c in col..n {
                let sub = field.mul(&f, &a[col * n + c]);
                a[r * n + c] = field.sub(&a[r * n + c], &sub);
            }
        }
    }
    det
}

/// Reduced row echelon form and the pivot columns. Pivots are the first
/// nonzero entry in column order.
pub fn rref(m: &ConcreteMatrix, field: &FieldSpec) -> (ConcreteMatrix, Vec<usize>) {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.entries.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !field.is_zero(&a[i * cols + col])) else {
            continue;
        };
        if piv != r {
            for c in 0..cols {
                a.swap(piv * cols + c, r * cols + c);
            }
        }
        let inv = field.inv(&a[r * cols + col]).expect("nonzero pivot");
        for c in col..cols {
            a[r * cols + c] = field.mul(&a[r * cols + c], &inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a[i * cols + col].clone();
            if field.is_zero(&f) {
                continue;
            }
            for c in col..cols {
                let sub = field.mul(&f, &a[r * cols + c]);
                a[i * cols + c] = field.sub(&a[i * cols + c], &sub);
            }
        }
        pivots.push(col);
        r += 1;
    }
    (
        ConcreteMatrix {
            rows,
            cols,
            entries: a,
        },
        pivots,
    )
}

/// `M = L U` with `L` the pivot columns of `M` and `U` the nonzero rows of
/// its reduced echelon form. Returns the columns of `L` and the rows of `U`.
pub fn rank_factorization(
    m: &ConcreteMatrix,
    field: &FieldSpec,
) -> Vec<(Vec<FieldElem>, Vec<FieldElem>)> {
    let (r, pivots) = rref(m, field);
    pivots
        .iter()
        .enumerate()
        .map(|(i, &pc)| (m.column(pc), r.row(i).to_vec()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn identity_rank() {
        let gf3 = FieldSpec::Prime(3);
        assert_eq!(matrix_rank(&ConcreteMatrix::identity(2, &gf3), &gf3), 2);
        assert_eq!(matrix_rank(&ConcreteMatrix::zeros(0, 0, &gf3), &gf3), 0);
        assert_eq!(matrix_rank(&ConcreteMatrix::zeros(3, 4, &gf3), &gf3), 0);
    }

    #[test]
    fn singular_rational_block() {
        let q = FieldSpec::Rationals;
        let m = ConcreteMatrix::from_i64(3, 3, &[1, 0, 2, 0, 1, 0, 1, 1, 2], &q);
        assert_eq!(matrix_rank(&m, &q), 2);
        assert_eq!(determinant(&m, &q), q.zero());
    }

    #[test]
    fn rational_entries_rank() {
        let q = FieldSpec::Rationals;
        let h = |n: i64, d: i64| q.from_ratio(&BigInt::from(n), &BigInt::from(d)).unwrap();
        let m = ConcreteMatrix::new(2, 2, vec![h(1, 2), h(1, 3), h(3, 2), h(1, 1)]).unwrap();
        assert_eq!(matrix_rank(&m, &q), 1);
    }

    #[test]
    fn factorization_reproduces_matrix() {
        let f = FieldSpec::Prime(7);
        let m = ConcreteMatrix::from_i64(3, 3, &[1, 2, 3, 2, 4, 6, 0, 1, 1], &f);
        let fac = rank_factorization(&m, &f);
        assert_eq!(fac.len(), 2);
        let sum = fac
            .iter()
            .fold(ConcreteMatrix::zeros(3, 3, &f), |acc, (u, v)| {
                acc.add(&ConcreteMatrix::outer(u, v, &f), &f)
            });
        assert_eq!(sum, m);
    }

    #[test]
    fn quadratic_determinant() {
        let f = FieldSpec::Quadratic(2);
        let r = f.sqrt_d().unwrap();
        let m = ConcreteMatrix::new(2, 2, vec![f.one(), r.clone(), r, f.from_i64(3)]).unwrap();
        assert_eq!(determinant(&m, &f), f.one());
        assert_eq!(matrix_rank(&m, &f), 2);
    }
}

//! Word-sized kernels for GF(p), `p < 2^31`, used by the enumeration hot loops.

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    t.rem_euclid(p as i64) as u64
}

/// Rank of a row-major `rows x cols` matrix of residues. The buffer is destroyed.
pub fn rank_in_place(buf: &mut [u64], rows: usize, cols: usize, p: u64) -> usize {
    debug_assert_eq!(buf.len(), rows * cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| buf[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for c in col..cols {
                buf.swap(piv * cols + c, rank * cols + c);
            }
        }
        let inv = inv_mod(buf[rank * cols + col], p);
        for c in col..cols {
            buf[rank * cols + c] = buf[rank * cols + c] * inv % p;
        }
        for r in rank + 1..rows {
            let f = buf[r * cols + col];
            if f == 0 {
                continue;
            }
            for c in col..cols {
                let sub = f * buf[rank * cols + c] % p;
                buf[r * cols + c] = (buf[r * cols + c] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant of a row-major `n x n` matrix of residues. The buffer is destroyed.
pub fn det_in_place(buf: &mut [u64], n: usize, p: u64) -> u64 {
    debug_assert_eq!(buf.len(), n * n);
    let mut det = 1u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| buf[r * n + col] != 0) else {
            return 0;
        };
        if piv != col {
            for c in 0..n {
                buf.swap(piv * n + c, col * n + c);
            }
            det = (p - det) % p;
        }
        let d = buf[col * n + col];
        det = det * d % p;
        let inv = inv_mod(d, p);
        for r in col + 1..n {
            let f = buf[r * n + col] * inv % p;
            if f == 0 {
                continue;
            }
            for c in col..n {
                let sub = f * buf[col * n + c] % p;
                buf[r * n + c] = (buf[r * n + c] + p - sub) % p;
            }
        }
    }
    det
}

/// Incrementally maintained row-echelon basis of vectors over GF(p).
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    p: u64,
    len: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(len: usize, p: u64) -> Self {
        EchelonBasis {
            p,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis in place; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &mut [u64]) {
        debug_assert_eq!(v.len(), self.len);
        let p = self.p;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = v[pc];
            if f == 0 {
                continue;
            }
            for c in pc..self.len {
                v[c] = (v[c] + p - f * row[c] % p) % p;
            }
        }
    }

    /// Inserts `v`; returns false (and leaves the basis unchanged) if it is dependent.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        self.reduce(&mut v);
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[pc], self.p);
        for x in v.iter_mut().skip(pc) {
            *x = *x * inv % self.p;
        }
        // rows stay ordered by pivot so that `reduce` is a single forward pass
        let at = self.pivots.partition_point(|&q| q < pc);
        self.rows.insert(at, v);
        self.pivots.insert(at, pc);
        true
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }
}

use rayon::prelude::*;

use super::matrix::SymbolicMatrix;
use super::MinrankError;
use crate::budget::check_space;
use crate::fields::gfp::rank_in_place;
use crate::fields::{ConcreteMatrix, FieldElem, FieldSpec};
use crate::syslang::{solve_bruteforce, Assignment, QuadraticSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinrankResult {
    pub minrank: usize,
    pub witness: Option<Assignment>,
}

/// Entries reduced mod p as `constant + sum coeff * x[var]`.
struct Compiled {
    p: u64,
    dim: usize,
    constants: Vec<u64>,
    /// `(flat entry index, coefficient)` for every variable, by variable index.
    by_var: Vec<Vec<(usize, u64)>>,
}

impl Compiled {
    fn new(a: &SymbolicMatrix, p: u64) -> Self {
        let f = FieldSpec::Prime(p);
        let r = |x: &num_bigint::BigInt| match f.from_int(x) {
            FieldElem::Residue(v) => v,
            _ => unreachable!(),
        };
        let index: std::collections::HashMap<&str, usize> = a
            .variables()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut by_var = vec![Vec::new(); a.n()];
        let mut constants = Vec::with_capacity(a.entries().len());
        for (pos, e) in a.entries().iter().enumerate() {
            constants.push(r(e.constant_part()));
            for (v, c) in e.terms() {
                let c = r(c);
                if c != 0 {
                    by_var[index[v.as_str()]].push((pos, c));
                }
            }
        }
        Compiled {
            p,
            dim: a.dim(),
            constants,
            by_var,
        }
    }

    fn rank(&self, x: &[u64], buf: &mut Vec<u64>) -> usize {
        buf.clear();
        buf.extend_from_slice(&self.constants);
        for (v, terms) in self.by_var.iter().enumerate() {
            if x[v] == 0 {
                continue;
            }
            for &(pos, c) in terms {
                buf[pos] = (buf[pos] + c * x[v]) % self.p;
            }
        }
        rank_in_place(buf, self.dim, self.dim, self.p)
    }

    /// Least rank with `x[0] = first`, plus the first assignment attaining it.
    /// Stops as soon as `floor` is reached.
    fn scan(&self, first: u64, floor: usize) -> (usize, Vec<u64>) {
        let n = self.by_var.len();
        let mut x = vec![0u64; n];
        x[0] = first;
        let mut buf = Vec::with_capacity(self.constants.len());
        let mut best = (usize::MAX, x.clone());
        loop {
            let r = self.rank(&x, &mut buf);
            if r < best.0 {
                best = (r, x.clone());
                if r <= floor {
                    return best;
                }
            }
            // odometer over x[1..], last variable fastest
            let mut i = n;
            loop {
                if i == 1 {
                    return best;
                }
                i -= 1;
                x[i] += 1;
                if x[i] < self.p {
                    break;
                }
                x[i] = 0;
            }
        }
    }
}

/// Exact minimum rank over GF(p) with the lexicographically least witness
/// (variable order, residues ascending).
pub fn minrank_bruteforce(
    a: &SymbolicMatrix,
    field: &FieldSpec,
    budget: u64,
) -> Result<MinrankResult, MinrankError> {
    let FieldSpec::Prime(p) = *field else {
        return Err(MinrankError::NotPrimeField(field.clone()));
    };
    check_space(p, a.n(), budget)?;
    let c = Compiled::new(a, p);
    let floor = 2 * a.m();
    let to_assignment = |x: Vec<u64>| {
        let vals: Vec<FieldElem> = x.into_iter().map(FieldElem::Residue).collect();
        Assignment::from_values(a.variables(), &vals)
    };
    if a.n() == 0 {
        let mut buf = Vec::new();
        let r = c.rank(&[], &mut buf);
        return Ok(MinrankResult {
            minrank: r,
            witness: Some(Assignment::new()),
        });
    }
    let per_first: Vec<(usize, Vec<u64>)> =
        (0..p).into_par_iter().map(|r| c.scan(r, floor)).collect();
    let (minrank, x) = per_first
        .into_iter()
        .min_by_key(|(r, _)| *r)
        .expect("p >= 2");
    Ok(MinrankResult {
        minrank,
        witness: Some(to_assignment(x)),
    })
}

/// Solves `s` by brute force and extends the solution to the copies of `a`
/// (every copy takes the value of its base variable).
pub fn minrank_witness_search(
    a: &SymbolicMatrix,
    s: &QuadraticSystem,
    field: &FieldSpec,
    budget: u64,
) -> Result<Option<Assignment>, MinrankError> {
    let Some(sol) = solve_bruteforce(s, field, budget)? else {
        return Ok(None);
    };
    Ok(Some(a.propagate_copies(&sol)?))
}

/// Rows and columns kept in the bordered submatrix for block `l` (0-based):
/// those whose 1-based index is not a multiple of 3, plus `3l + 2`.
fn bordered_indices(dim: usize, l: usize) -> Vec<usize> {
    (0..dim)
        .filter(|&i| (i + 1) % 3 != 0 || i == 3 * l + 2)
        .collect()
}

/// The `(2m+1) x (2m+1)` submatrix of an evaluated matrix that keeps every
/// row and column not divisible by 3 (1-based) plus row and column `3(l+1)`.
pub fn bordered_submatrix(evaluated: &ConcreteMatrix, l: usize) -> ConcreteMatrix {
    let idx = bordered_indices(evaluated.rows(), l);
    evaluated.select(&idx, &idx)
}

/// The `l`-th (0-based) diagonal 3x3 block of an evaluated matrix.
pub fn diagonal_block(evaluated: &ConcreteMatrix, l: usize) -> ConcreteMatrix {
    let idx = [3 * l, 3 * l + 1, 3 * l + 2];
    evaluated.select(&idx, &idx)
}

//! Slow, obvious reference procedures over GF(p) used to cross-check the
//! main crate. Nothing here depends on it; values are plain `u64` residues
//! and tensors are flat arrays indexed `(i * d2 + j) * d3 + k`.

pub mod linalg;
pub mod systems;
pub mod tensor;

pub use linalg::{det_leibniz, rank_by_minors, rank_gauss};
pub use systems::{
    homogeneous_solvable, random_normalized_system, satisfies_assumptions, solvable_by_enumeration,
    OEq,
};
pub use tensor::{rank_leq_enumerate, rank_one_tensors};

/// Reduces an integer into `0..p`.
pub fn residue(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// Every vector in GF(p)^n, in lexicographic order.
pub fn all_vectors(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for v in &out {
            for x in 0..p {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors() {
        assert_eq!(
            all_vectors(2, 2),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(all_vectors(0, 5), vec![Vec::<u64>::new()]);
        assert_eq!(residue(-1, 7), 6);
    }
}

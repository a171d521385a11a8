use std::collections::BTreeSet;

use crate::all_vectors;

/// Every nonzero rank-one tensor of the given shape, each listed once.
pub fn rank_one_tensors(dims: [usize; 3], p: u64) -> Vec<Vec<u64>> {
    let [d1, d2, d3] = dims;
    let nz = |n| {
        all_vectors(n, p)
            .into_iter()
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect::<Vec<_>>()
    };
    let (us, vs, ws) = (nz(d1), nz(d2), nz(d3));
    let mut set = BTreeSet::new();
    for u in &us {
        for v in &vs {
            for w in &ws {
                let mut t = Vec::with_capacity(d1 * d2 * d3);
                for a in u {
                    for b in v {
                        for c in w {
                            t.push(a * b % p * c % p);
                        }
                    }
                }
                set.insert(t);
            }
        }
    }
    set.into_iter().collect()
}

/// Whether `t` is a sum of at most `r` rank-one tensors, by trying every
/// multiset of at most `r` of them.
pub fn rank_leq_enumerate(t: &[u64], dims: [usize; 3], p: u64, r: usize) -> bool {
    let ones = rank_one_tensors(dims, p);
    let mut residual: Vec<u64> = t.iter().map(|x| x % p).collect();
    search(&ones, &mut residual, p, r, 0)
}

fn search(ones: &[Vec<u64>], residual: &mut Vec<u64>, p: u64, left: usize, start: usize) -> bool {
    if residual.iter().all(|&x| x == 0) {
        return true;
    }
    if left == 0 {
        return false;
    }
    for i in start..ones.len() {
        for (x, y) in residual.iter_mut().zip(&ones[i]) {
            *x = (*x + p - y) % p;
        }
        let found = search(ones, residual, p, left - 1, i);
        for (x, y) in residual.iter_mut().zip(&ones[i]) {
            *x = (*x + y) % p;
        }
        if found {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        // (p^d1 - 1)(p^d2 - 1)(p^d3 - 1) / (p - 1)^2 distinct tensors
        assert_eq!(rank_one_tensors([2, 2, 2], 2).len(), 27);
        assert_eq!(rank_one_tensors([2, 2, 2], 3).len(), 8 * 8 * 8 / 4);
    }

    #[test]
    fn known_ranks_over_gf2() {
        let mut diag = vec![0u64; 8];
        diag[0] = 1;
        diag[7] = 1;
        assert!(!rank_leq_enumerate(&diag, [2, 2, 2], 2, 1));
        assert!(rank_leq_enumerate(&diag, [2, 2, 2], 2, 2));
        assert!(rank_leq_enumerate(&[0; 8], [2, 2, 2], 2, 0));
        // the W tensor e1e1e2 + e1e2e1 + e2e1e1 has rank 3 over every field
        let mut w = vec![0u64; 8];
        w[1] = 1;
        w[2] = 1;
        w[4] = 1;
        assert!(!rank_leq_enumerate(&w, [2, 2, 2], 2, 2));
        assert!(rank_leq_enumerate(&w, [2, 2, 2], 2, 3));
    }
}

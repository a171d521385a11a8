use rand::Rng;

use crate::{all_vectors, residue};

/// A quadratic equation over variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OEq {
    Add(usize, usize, usize),
    Mul(usize, usize, usize),
    Copy(usize, usize),
    Const(usize, i64),
}

impl OEq {
    pub fn kind(&self) -> &'static str {
        match self {
            OEq::Add(..) => "ADD",
            OEq::Mul(..) => "MUL",
            OEq::Copy(..) => "COPY",
            OEq::Const(..) => "CONST",
        }
    }

    /// Variables in slot order `c, a, b`.
    pub fn slots(&self) -> Vec<usize> {
        match *self {
            OEq::Add(c, a, b) | OEq::Mul(c, a, b) => vec![c, a, b],
            OEq::Copy(c, a) => vec![c, a],
            OEq::Const(c, _) => vec![c],
        }
    }

    pub fn constant(&self) -> Option<i64> {
        match self {
            OEq::Const(_, k) => Some(*k),
            _ => None,
        }
    }

    pub fn holds(&self, x: &[u64], p: u64) -> bool {
        match *self {
            OEq::Add(c, a, b) => x[c] == (x[a] + x[b]) % p,
            OEq::Mul(c, a, b) => x[c] == x[a] * x[b] % p,
            OEq::Copy(c, a) => x[c] == x[a],
            OEq::Const(c, k) => x[c] == residue(k, p),
        }
    }
}

/// Tries every assignment of `n` variables.
pub fn solvable_by_enumeration(
    n: usize,
    p: u64,
    holds: impl Fn(&[u64]) -> bool,
) -> Option<Vec<u64>> {
    all_vectors(n, p).into_iter().find(|x| holds(x))
}

/// Whether some nonzero `x` makes every form `sum c x_i x_j` vanish.
pub fn homogeneous_solvable(forms: &[Vec<(usize, usize, i64)>], n: usize, p: u64) -> bool {
    all_vectors(n, p).into_iter().any(|x| {
        x.iter().any(|&v| v != 0)
            && forms.iter().all(|f| {
                f.iter().fold(0u64, |acc, &(i, j, c)| {
                    (acc + residue(c, p) * x[i] % p * x[j]) % p
                }) == 0
            })
    })
}

/// No repeated variable in an equation, no two equations sharing two
/// variables, and every multiplier `b` of a product occurring exactly twice,
/// the other time as the left side of a copy.
pub fn satisfies_assumptions(eqs: &[OEq]) -> bool {
    for e in eqs {
        let s = e.slots();
        for i in 0..s.len() {
            if s[i + 1..].contains(&s[i]) {
                return false;
            }
        }
    }
    for i in 0..eqs.len() {
        for j in i + 1..eqs.len() {
            let a = eqs[i].slots();
            if eqs[j].slots().iter().filter(|v| a.contains(v)).count() > 1 {
                return false;
            }
        }
    }
    for (i, e) in eqs.iter().enumerate() {
        if let OEq::Mul(_, _, b) = *e {
            let others: Vec<&OEq> = eqs
                .iter()
                .enumerate()
                .filter(|(j, f)| *j != i && f.slots().contains(&b))
                .map(|(_, f)| f)
                .collect();
            let total: usize = eqs
                .iter()
                .map(|f| f.slots().iter().filter(|&&v| v == b).count())
                .sum();
            if total != 2 || others.len() != 1 || !matches!(others[0], OEq::Copy(c, _) if *c == b) {
                return false;
            }
        }
    }
    true
}

fn distinct<R: Rng>(rng: &mut R, n: usize, k: usize) -> Option<Vec<usize>> {
    if n < k {
        return None;
    }
    let mut out = Vec::with_capacity(k);
    while out.len() < k {
        let v = rng.gen_range(0..n);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    Some(out)
}

/// A random system with `1..=max_m` equations over at most `max_vars`
/// variables that passes [`satisfies_assumptions`]. Returns the number of
/// variables actually used (indices are compacted) and the equations.
pub fn random_normalized_system<R: Rng>(
    rng: &mut R,
    max_m: usize,
    max_vars: usize,
) -> (usize, Vec<OEq>) {
    loop {
        let m = rng.gen_range(1..=max_m);
        let n = rng.gen_range(1..=max_vars);
        let mut eqs = Vec::with_capacity(m);
        while eqs.len() < m {
            let e = match rng.gen_range(0..4) {
                0 => distinct(rng, n, 3).map(|v| OEq::Add(v[0], v[1], v[2])),
                1 => distinct(rng, n, 3).map(|v| OEq::Mul(v[0], v[1], v[2])),
                2 => distinct(rng, n, 2).map(|v| OEq::Copy(v[0], v[1])),
                _ => Some(OEq::Const(rng.gen_range(0..n), rng.gen_range(-3..=3))),
            };
            let Some(e) = e else { continue };
            let mul_b = if let OEq::Mul(_, _, b) = e {
                Some(b)
            } else {
                None
            };
            eqs.push(e);
            if let Some(b) = mul_b {
                if eqs.len() < m && rng.gen_bool(0.8) {
                    let a = rng.gen_range(0..n);
                    if a != b {
                        eqs.push(OEq::Copy(b, a));
                    }
                }
            }
        }
        if !satisfies_assumptions(&eqs) {
            continue;
        }
        let mut used: Vec<usize> = eqs.iter().flat_map(|e| e.slots()).collect();
        used.sort_unstable();
        used.dedup();
        let re = |v: usize| used.binary_search(&v).expect("used");
        let eqs = eqs
            .into_iter()
            .map(|e| match e {
                OEq::Add(c, a, b) => OEq::Add(re(c), re(a), re(b)),
                OEq::Mul(c, a, b) => OEq::Mul(re(c), re(a), re(b)),
                OEq::Copy(c, a) => OEq::Copy(re(c), re(a)),
                OEq::Const(c, k) => OEq::Const(re(c), k),
            })
            .collect();
        return (used.len(), eqs);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn assumption_checks() {
        assert!(!satisfies_assumptions(&[OEq::Mul(0, 1, 1)]));
        assert!(!satisfies_assumptions(&[
            OEq::Mul(0, 1, 2),
            OEq::Copy(2, 1)
        ]));
        assert!(satisfies_assumptions(&[OEq::Mul(0, 1, 2), OEq::Copy(2, 3)]));
        assert!(!satisfies_assumptions(&[
            OEq::Mul(0, 1, 2),
            OEq::Copy(3, 2)
        ]));
        assert!(satisfies_assumptions(&[OEq::Const(0, 2), OEq::Copy(1, 0)]));
    }

    #[test]
    fn generated_systems_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut kinds = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let (n, eqs) = random_normalized_system(&mut rng, 3, 4);
            assert!(n <= 4 && !eqs.is_empty() && eqs.len() <= 3);
            assert!(satisfies_assumptions(&eqs));
            kinds.extend(eqs.iter().map(|e| e.kind()));
        }
        assert_eq!(kinds.len(), 4);
    }

    #[test]
    fn enumeration() {
        let eqs = [OEq::Mul(0, 1, 2), OEq::Copy(2, 1), OEq::Const(0, 2)];
        let holds = |x: &[u64]| eqs.iter().all(|e| e.holds(x, 7));
        assert_eq!(solvable_by_enumeration(3, 7, holds), Some(vec![2, 3, 3]));
        let holds = |x: &[u64]| eqs.iter().all(|e| e.holds(x, 5));
        assert_eq!(solvable_by_enumeration(3, 5, holds), None);
        assert!(!homogeneous_solvable(
            &[vec![(0, 1, 1)], vec![(0, 0, 1), (1, 1, 1)]],
            2,
            2
        ));
        assert!(homogeneous_solvable(&[vec![(0, 0, 1), (1, 1, 1)]], 2, 2));
    }
}

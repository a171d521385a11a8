//! Exhaustive tensor rank decision over GF(p).
//!
//! `T` has rank at most `r` exactly when some `r` rank-one matrices span a
//! space containing every frontal slice; the third-mode vectors are then the
//! coordinates of the slices. Rank-one matrices are enumerated once each as
//! `u v^T` with the first nonzero coordinate of `u` and of `v` equal to 1,
//! and chosen in increasing order. A branch is cut as soon as the span of
//! the chosen matrices together with the slices has dimension above `r`,
//! since any completion must span at least that space.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use super::RankError;
use crate::budget::BudgetExceeded;
use crate::fields::gfp::EchelonBasis;
use crate::fields::{solve_affine, ConcreteMatrix, FieldElem, FieldSpec};
use crate::tensorize::{slice, verify_expansion, Expansion, RankOneTerm, Tensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDecision {
    pub bound: usize,
    pub verdict: Verdict,
    pub certificate: Option<Expansion>,
    pub nodes: u64,
}

/// All nonzero vectors of length `len` over GF(p) whose first nonzero
/// coordinate is 1, by position of that coordinate and then lexicographically.
pub fn canonical_vectors(len: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..len {
        let tail = len - lead - 1;
        let count = p.pow(tail as u32);
        for code in 0..count {
            let mut v = vec![0u64; len];
            v[lead] = 1;
            let mut c = code;
            for pos in (lead + 1..len).rev() {
                v[pos] = c % p;
                c /= p;
            }
            out.push(v);
        }
    }
    out
}

/// Number of canonical vectors of length `len`, if it fits in a `u64`.
fn canonical_count(len: usize, p: u64) -> Option<u64> {
    (0..len).try_fold(0u64, |acc, i| acc.checked_add(p.checked_pow(i as u32)?))
}

/// The `index`-th entry of `canonical_vectors(len, p)`.
fn canonical_at(mut index: u64, len: usize, p: u64) -> Vec<u64> {
    let mut v = vec![0u64; len];
    for lead in 0..len {
        let block = p.pow((len - lead - 1) as u32);
        if index < block {
            v[lead] = 1;
            for pos in (lead + 1..len).rev() {
                v[pos] = index % p;
                index /= p;
            }
            return v;
        }
        index -= block;
    }
    unreachable!("index beyond the canonical vectors")
}

/// Candidate rank-one matrices `u v^T`, flattened, decoded on demand.
struct Cands {
    d1: usize,
    d2: usize,
    nv: u64,
    count: u64,
    p: u64,
}

impl Cands {
    fn pair(&self, c: u64) -> (Vec<u64>, Vec<u64>) {
        (
            canonical_at(c / self.nv, self.d1, self.p),
            canonical_at(c % self.nv, self.d2, self.p),
        )
    }

    fn matrix(&self, c: u64) -> Vec<u64> {
        let (u, v) = self.pair(c);
        u.iter()
            .flat_map(|&a| v.iter().map(move |&b| a * b % self.p))
            .collect()
    }
}

struct Ctx<'a> {
    r: usize,
    cands: &'a Cands,
    nodes: &'a AtomicU64,
    budget: u64,
}

struct Node {
    chosen: Vec<u64>,
    span: EchelonBasis,
    with_slices: EchelonBasis,
}

impl Ctx<'_> {
    fn tick(&self) -> Result<(), BudgetExceeded> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            return Err(BudgetExceeded {
                what: format!("more than {} search nodes", self.budget),
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Tries candidate `c` on top of `node`; `Ok(None)` when it is redundant
    /// or the branch is cut.
    fn child(&self, node: &Node, c: u64) -> Result<Option<Node>, BudgetExceeded> {
        let v = self.cands.matrix(c);
        if node.span.contains(&v) {
            return Ok(None);
        }
        self.tick()?;
        let mut span = node.span.clone();
        span.insert(v.clone());
        let mut with_slices = node.with_slices.clone();
        with_slices.insert(v.clone());
        if with_slices.dim() > self.r {
            return Ok(None);
        }
        let mut chosen = node.chosen.clone();
        chosen.push(c);
        Ok(Some(Node {
            chosen,
            span,
            with_slices,
        }))
    }

    fn dfs(&self, node: Node) -> Result<Option<Vec<u64>>, BudgetExceeded> {
        if node.with_slices.dim() == node.span.dim() {
            return Ok(Some(node.chosen));
        }
        if node.chosen.len() == self.r {
            return Ok(None);
        }
        let start = node.chosen.last().map_or(0, |&c| c + 1);
        for c in start..self.cands.count {
            if let Some(child) = self.child(&node, c)? {
                if let Some(found) = self.dfs(child)? {
                    return Ok(Some(found));
                }
            }
        }
        Ok(None)
    }
}

fn residues(v: &[FieldElem]) -> Vec<u64> {
    v.iter()
        .map(|e| match e {
            FieldElem::Residue(r) => *r,
            _ => unreachable!("prime field"),
        })
        .collect()
}

/// Decides whether `t` has rank at most `r` over GF(p). A yes-verdict
/// carries a verified expansion with at most `r` terms.
pub fn tensor_rank_leq(t: &Tensor, r: usize, node_budget: u64) -> Result<RankDecision, RankError> {
    let field = t.field().clone();
    let FieldSpec::Prime(p) = field else {
        return Err(RankError::NotPrimeField(field));
    };
    let [d1, d2, d3] = t.dims();
    let len = d1 * d2;
    let slices: Vec<Vec<u64>> = (0..d3)
        .map(|k| residues(slice(t, 3, k).expect("in range").entries()))
        .collect();
    let mut root_with = EchelonBasis::new(len, p);
    for s in &slices {
        root_with.insert(s.clone());
    }
    let no = |nodes| RankDecision {
        bound: r,
        verdict: Verdict::No,
        certificate: None,
        nodes,
    };
    if root_with.dim() > r {
        return Ok(no(0));
    }
    let root = || Node {
        chosen: Vec::new(),
        span: EchelonBasis::new(len, p),
        with_slices: root_with.clone(),
    };
    if root_with.dim() == 0 {
        return Ok(RankDecision {
            bound: r,
            verdict: Verdict::Yes,
            certificate: Some(Expansion::default()),
            nodes: 0,
        });
    }
    let too_many = || {
        RankError::Budget(BudgetExceeded {
            what: format!("rank-one candidates for a {d1}x{d2} slice over GF({p})"),
            budget: node_budget,
        })
    };
    let nu = canonical_count(d1, p).ok_or_else(too_many)?;
    let nv = canonical_count(d2, p).ok_or_else(too_many)?;
    let cands = Cands {
        d1,
        d2,
        nv,
        count: nu.checked_mul(nv).ok_or_else(too_many)?,
        p,
    };
    let nodes = AtomicU64::new(0);
    let ctx = Ctx {
        r,
        cands: &cands,
        nodes: &nodes,
        budget: node_budget,
    };
    let found = (0..cands.count)
        .into_par_iter()
        .map(|c| match ctx.child(&root(), c) {
            Ok(Some(child)) => ctx.dfs(child),
            Ok(None) => Ok(None),
            Err(e) => Err(e),
        })
        .find_map_first(|res| match res {
            Ok(None) => None,
            Ok(Some(chosen)) => Some(Ok(chosen)),
            Err(e) => Some(Err(e)),
        });
    let nodes = nodes.load(Ordering::Relaxed);
    let chosen = match found {
        None => return Ok(no(nodes)),
        Some(Err(e)) => return Err(RankError::Budget(e)),
        Some(Ok(chosen)) => chosen,
    };
    let terms_uv: Vec<(Vec<u64>, Vec<u64>)> = chosen.iter().map(|&c| cands.pair(c)).collect();
    let certificate = certificate_from_pairs(t, &terms_uv)?;
    Ok(RankDecision {
        bound: r,
        verdict: Verdict::Yes,
        certificate: Some(certificate),
        nodes,
    })
}

/// Solves for the third-mode vectors given the matrix parts and verifies.
fn certificate_from_pairs(
    t: &Tensor,
    pairs: &[(Vec<u64>, Vec<u64>)],
) -> Result<Expansion, RankError> {
    let field = t.field();
    let [d1, d2, d3] = t.dims();
    let lift = |v: &[u64]| v.iter().map(|&x| FieldElem::Residue(x)).collect::<Vec<_>>();
    let mats: Vec<ConcreteMatrix> = pairs
        .iter()
        .map(|(u, v)| ConcreteMatrix::outer(&lift(u), &lift(v), field))
        .collect();
    let coeffs =
        ConcreteMatrix::from_fn(d1 * d2, mats.len(), |row, l| mats[l].entries()[row].clone());
    let mut ws = vec![vec![field.zero(); d3]; mats.len()];
    for k in 0..d3 {
        let rhs = slice(t, 3, k)?.into_entries();
        let sol = solve_affine(&coeffs, &rhs, field)?;
        let x = sol
            .particular
            .ok_or_else(|| RankError::Internal("slice outside the chosen span".into()))?;
        for (l, xl) in x.into_iter().enumerate() {
            ws[l][k] = xl;
        }
    }
    let terms = pairs
        .iter()
        .zip(ws)
        .map(|((u, v), w)| RankOneTerm {
            u: lift(u),
            v: lift(v),
            w,
        })
        .collect();
    let e = Expansion { terms };
    if !verify_expansion(t, &e)? {
        return Err(RankError::Internal("certificate does not verify".into()));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2_tensor(bits: u32) -> Tensor {
        let f = FieldSpec::Prime(2);
        let entries = (0..8)
            .map(|b| FieldElem::Residue(((bits >> b) & 1) as u64))
            .collect();
        Tensor::new([2, 2, 2], f, entries).unwrap()
    }

    #[test]
    fn canonical_vector_order() {
        assert_eq!(
            canonical_vectors(2, 3),
            vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![0, 1]]
        );
        assert_eq!(canonical_vectors(3, 2).len(), 7);
        for (len, p) in [(1, 2), (3, 3), (4, 2)] {
            let all = canonical_vectors(len, p);
            assert_eq!(canonical_count(len, p), Some(all.len() as u64));
            for (i, v) in all.iter().enumerate() {
                assert_eq!(&canonical_at(i as u64, len, p), v);
            }
        }
        assert_eq!(canonical_count(40, 7), None);
    }

    #[test]
    fn zero_and_unit() {
        let z = tensor_rank_leq(&gf2_tensor(0), 0, 1000).unwrap();
        assert_eq!(z.verdict, Verdict::Yes);
        assert!(z.certificate.unwrap().is_empty());
        let e = gf2_tensor(1);
        assert_eq!(tensor_rank_leq(&e, 0, 1000).unwrap().verdict, Verdict::No);
        let yes = tensor_rank_leq(&e, 1, 1000).unwrap();
        assert_eq!(yes.verdict, Verdict::Yes);
        assert_eq!(yes.certificate.unwrap().len(), 1);
    }

    #[test]
    fn diagonal_has_rank_two() {
        // e1 (x) e1 (x) e1 + e2 (x) e2 (x) e2
        let t = gf2_tensor(1 | 1 << 7);
        assert_eq!(tensor_rank_leq(&t, 1, 1000).unwrap().verdict, Verdict::No);
        let d = tensor_rank_leq(&t, 2, 1000).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        assert!(verify_expansion(&t, d.certificate.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn budget_is_reported() {
        let f = FieldSpec::Prime(3);
        let t = Tensor::from_fn([3, 3, 3], &f, |i, j, k| {
            f.from_i64(((i + 2 * j + k) % 3 == 0) as i64)
        });
        assert!(matches!(
            tensor_rank_leq(&t, 5, 3),
            Err(RankError::Budget(_))
        ));
    }

    #[test]
    fn rejects_other_fields() {
        let t = Tensor::zeros([1, 1, 1], &FieldSpec::Rationals);
        assert!(matches!(
            tensor_rank_leq(&t, 1, 10),
            Err(RankError::NotPrimeField(_))
        ));
    }
}

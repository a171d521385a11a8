//! Rewriting an expansion so that given rank-one frontal slices appear as
//! terms.
//!
//! If the slice `M = t::k` has rank at most one and `w_l(k) != 0`, then
//! `M_l = (M - sum_{j != l} w_j(k) M_j) / w_l(k)`. Substituting gives an
//! expansion of the same length where term `l` becomes `M (x) w_l / w_l(k)`
//! and every other `w_j` becomes `w_j - (w_j(k) / w_l(k)) w_l`.

use super::RankError;
use crate::fields::{matrix_rank, ConcreteMatrix, FieldSpec};
use crate::tensorize::{factor_rank_one, slice, verify_expansion, Expansion, RankOneTerm, Tensor};

/// Pins slice `k` as the term at position `pos`, choosing the pivot among
/// terms at positions `>= pos`. Terms before `pos` keep their matrix parts.
fn absorb_at(t: &Tensor, e: &Expansion, k: usize, pos: usize) -> Result<Expansion, RankError> {
    let field = t.field();
    let m = slice(t, 3, k)?;
    let Some((u, v)) = factor_rank_one(&m, field).map_err(|_| RankError::NotRankOne(k))? else {
        return Ok(e.clone());
    };
    let l = (pos..e.len())
        .find(|&l| !field.is_zero(&e.terms[l].w[k]))
        .ok_or(RankError::NoPivot(k))?;
    let pivot = e.terms[l].w[k].clone();
    let wl: Vec<_> = e.terms[l]
        .w
        .iter()
        .map(|x| field.div(x, &pivot).expect("nonzero pivot"))
        .collect();
    let mut terms: Vec<RankOneTerm> = Vec::with_capacity(e.len());
    for (j, term) in e.terms.iter().enumerate() {
        if j == l {
            continue;
        }
        let c = term.w[k].clone();
        let w = term
            .w
            .iter()
            .zip(&wl)
            .map(|(a, b)| field.sub(a, &field.mul(&c, b)))
            .collect();
        terms.push(RankOneTerm {
            u: term.u.clone(),
            v: term.v.clone(),
            w,
        });
    }
    terms.insert(pos, RankOneTerm { u, v, w: wl });
    let out = Expansion { terms };
    if !verify_expansion(t, &out)? {
        return Err(RankError::Internal(
            "absorbed expansion does not verify".into(),
        ));
    }
    Ok(out)
}

fn check_verified(t: &Tensor, e: &Expansion) -> Result<(), RankError> {
    if verify_expansion(t, e)? {
        Ok(())
    } else {
        Err(RankError::NotVerified)
    }
}

/// Rewrites a verified expansion of `t` so that its first term's matrix part
/// is the fixed factorization of the rank-one slice `t::k1`. A zero slice
/// leaves the expansion unchanged.
pub fn absorb_slice(t: &Tensor, e: &Expansion, k1: usize) -> Result<Expansion, RankError> {
    check_verified(t, e)?;
    absorb_at(t, e, k1, 0)
}

/// Pins the linearly independent rank-one slices `t::h`, `h` in `hs`, as the
/// first `hs.len()` terms, in order.
pub fn absorb_slices(t: &Tensor, e: &Expansion, hs: &[usize]) -> Result<Expansion, RankError> {
    check_verified(t, e)?;
    let field = t.field();
    let [d1, d2, _] = t.dims();
    let mut rows = Vec::new();
    for &h in hs {
        let m = slice(t, 3, h)?;
        if matrix_rank(&m, field) > 1 {
            return Err(RankError::NotRankOne(h));
        }
        rows.extend(m.into_entries());
    }
    let stack = ConcreteMatrix::new(hs.len(), d1 * d2, rows).expect("shape");
    if matrix_rank(&stack, field) != hs.len() {
        return Err(RankError::Dependent);
    }
    let mut cur = e.clone();
    for (i, &h) in hs.iter().enumerate() {
        cur = absorb_at(t, &cur, h, i)?;
    }
    Ok(cur)
}

/// Whether the term at `pos` has matrix part equal to the fixed factorization
/// of slice `k`.
pub fn pins_slice(t: &Tensor, e: &Expansion, k: usize, pos: usize, field: &FieldSpec) -> bool {
    let Ok(m) = slice(t, 3, k) else { return false };
    match (factor_rank_one(&m, field), e.terms.get(pos)) {
        (Ok(Some((u, v))), Some(term)) => term.u == u && term.v == v,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldElem;

    fn v(f: &FieldSpec, xs: &[i64]) -> Vec<FieldElem> {
        xs.iter().map(|&x| f.from_i64(x)).collect()
    }

    #[test]
    fn slice_already_a_term() {
        let f = FieldSpec::Prime(5);
        let e = Expansion {
            terms: vec![
                RankOneTerm {
                    u: v(&f, &[1, 0]),
                    v: v(&f, &[1, 0]),
                    w: v(&f, &[1, 0]),
                },
                RankOneTerm {
                    u: v(&f, &[0, 1]),
                    v: v(&f, &[0, 1]),
                    w: v(&f, &[0, 1]),
                },
            ],
        };
        let t = e.sum([2, 2, 2], &f);
        let out = absorb_slice(&t, &e, 0).unwrap();
        assert_eq!(out, e);
        let out = absorb_slice(&t, &e, 1).unwrap();
        assert_eq!(out.terms[0], e.terms[1]);
        assert_eq!(out.terms[1], e.terms[0]);
    }

    #[test]
    fn zero_slice_is_a_no_op() {
        let f = FieldSpec::Prime(5);
        let e = Expansion {
            terms: vec![RankOneTerm {
                u: v(&f, &[1, 2]),
                v: v(&f, &[3, 1]),
                w: v(&f, &[0, 4]),
            }],
        };
        let t = e.sum([2, 2, 2], &f);
        assert_eq!(absorb_slice(&t, &e, 0).unwrap(), e);
    }

    #[test]
    fn mixed_terms() {
        let f = FieldSpec::Prime(5);
        let e = Expansion {
            terms: vec![
                RankOneTerm {
                    u: v(&f, &[1, 1]),
                    v: v(&f, &[1, 0]),
                    w: v(&f, &[2, 1, 0]),
                },
                RankOneTerm {
                    u: v(&f, &[0, 1]),
                    v: v(&f, &[1, 3]),
                    w: v(&f, &[0, 1, 1]),
                },
                RankOneTerm {
                    u: v(&f, &[1, 0]),
                    v: v(&f, &[0, 1]),
                    w: v(&f, &[0, 0, 3]),
                },
            ],
        };
        let t = e.sum([2, 2, 3], &f);
        let out = absorb_slice(&t, &e, 0).unwrap();
        assert_eq!(out.len(), 3);
        assert!(verify_expansion(&t, &out).unwrap());
        assert!(pins_slice(&t, &out, 0, 0, &f));
        // slice 1 mixes the first two terms and has rank two
        assert_eq!(absorb_slice(&t, &e, 1), Err(RankError::NotRankOne(1)));
    }

    #[test]
    fn rejects_unverified() {
        let f = FieldSpec::Prime(5);
        let t = Tensor::zeros([1, 1, 1], &f);
        let e = Expansion {
            terms: vec![RankOneTerm {
                u: v(&f, &[1]),
                v: v(&f, &[1]),
                w: v(&f, &[1]),
            }],
        };
        assert_eq!(absorb_slice(&t, &e, 0), Err(RankError::NotVerified));
    }

    #[test]
    fn dependent_slices_rejected() {
        let f = FieldSpec::Prime(5);
        let e = Expansion {
            terms: vec![RankOneTerm {
                u: v(&f, &[1, 0]),
                v: v(&f, &[1, 0]),
                w: v(&f, &[1, 2]),
            }],
        };
        let t = e.sum([2, 2, 2], &f);
        assert_eq!(absorb_slices(&t, &e, &[0, 1]), Err(RankError::Dependent));
        assert_eq!(absorb_slices(&t, &e, &[]).unwrap(), e);
        assert_eq!(
            absorb_slices(&t, &e, &[1]).unwrap(),
            absorb_slice(&t, &e, 1).unwrap()
        );
    }
}

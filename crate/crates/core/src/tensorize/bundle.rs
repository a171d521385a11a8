use serde::{Deserialize, Serialize};

use super::expansion::{factor_rank_one, verify_expansion, Expansion, RankOneTerm};
use super::tensor::{slice, Tensor};
use super::TensorError;
use crate::fields::{matrix_rank, rank_factorization, ConcreteMatrix, FieldElem, FieldSpec};
use crate::minrank::{evaluate_matrix, SymbolicMatrix};
use crate::syslang::Assignment;

/// The slice tensor of a symbolic matrix with its bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorBundle {
    pub tensor: Tensor,
    /// Frontal slice (0-based) holding the coefficients of each variable.
    pub slice_map: Vec<(String, usize)>,
    /// Frontal slice (0-based) holding the constants; always the last one.
    pub constants_slice: usize,
    pub m: usize,
    pub n: usize,
    pub rank_target: usize,
}

/// Stacks the coefficient matrix of every variable (in the matrix's variable
/// order) and then the constant matrix as frontal slices.
pub fn build_tensor(a: &SymbolicMatrix, field: &FieldSpec) -> TensorBundle {
    let d = a.dim();
    let mut slices: Vec<ConcreteMatrix> = a
        .variables()
        .iter()
        .map(|v| a.coefficient_matrix(Some(v), field))
        .collect();
    slices.push(a.coefficient_matrix(None, field));
    let n = a.n();
    TensorBundle {
        tensor: Tensor::from_frontal_slices(d, d, &slices, field),
        slice_map: a
            .variables()
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, v)| (v, k))
            .collect(),
        constants_slice: n,
        m: a.m(),
        n,
        rank_target: 2 * a.m() + n,
    }
}

/// Whether the variable slices are linearly independent as vectors.
pub fn check_slice_independence(b: &TensorBundle) -> bool {
    let [d1, d2, _] = b.tensor.dims();
    let field = b.tensor.field();
    let mut rows = Vec::with_capacity(b.n * d1 * d2);
    for (_, k) in &b.slice_map {
        let s = slice(&b.tensor, 3, *k).expect("slice in range");
        rows.extend(s.into_entries());
    }
    let stack = ConcreteMatrix::new(b.slice_map.len(), d1 * d2, rows).expect("shape");
    matrix_rank(&stack, field) == b.slice_map.len()
}

fn unit(len: usize, at: usize, field: &FieldSpec) -> Vec<FieldElem> {
    let mut v = vec![field.zero(); len];
    v[at] = field.one();
    v
}

/// A verified expansion of at most `2m + n` terms built from an assignment
/// that brings the rank of the matrix down to `2m`.
///
/// Each variable slice `A_x = u v^T` contributes `u (x) v (x) (e_x - s(x) e_c)`
/// where `c` is the constants slice, and each term `l (x) r` of a rank
/// factorization of the evaluated matrix contributes `l (x) r (x) e_c`.
pub fn expansion_from_assignment(
    a: &SymbolicMatrix,
    b: &TensorBundle,
    sigma: &Assignment,
    field: &FieldSpec,
) -> Result<Expansion, TensorError> {
    let evaluated = evaluate_matrix(a, sigma, field)?;
    let rank = matrix_rank(&evaluated, field);
    if rank > 2 * a.m() {
        return Err(TensorError::RankTooHigh {
            rank,
            bound: 2 * a.m(),
        });
    }
    let d3 = b.tensor.dims()[2];
    let c = b.constants_slice;
    let mut terms = Vec::with_capacity(b.rank_target);
    for (x, k) in &b.slice_map {
        let ax = slice(&b.tensor, 3, *k)?;
        let (u, v) = factor_rank_one(&ax, field)
            .map_err(|_| TensorError::Internal(format!("slice of {x} has rank above one")))?
            .ok_or_else(|| TensorError::Internal(format!("slice of {x} is zero")))?;
        let mut w = unit(d3, *k, field);
        w[c] = field.neg(sigma.get(x).expect("evaluated above"));
        terms.push(RankOneTerm { u, v, w });
    }
    for (l, r) in rank_factorization(&evaluated, field) {
        terms.push(RankOneTerm {
            u: l,
            v: r,
            w: unit(d3, c, field),
        });
    }
    let e = Expansion { terms };
    if !verify_expansion(&b.tensor, &e)? {
        return Err(TensorError::Internal(
            "constructed expansion does not verify".into(),
        ));
    }
    Ok(e)
}

#[derive(Serialize, Deserialize)]
struct SliceEntry {
    var: String,
    slice: usize,
}

#[derive(Serialize, Deserialize)]
struct BundleJson {
    m: usize,
    n: usize,
    rank_target: usize,
    dims: [usize; 3],
    slice_map: Vec<SliceEntry>,
    constants_slice: usize,
}

/// Bundle metadata (everything but the tensor entries). Slice indices are 0-based.
pub fn write_bundle_meta(b: &TensorBundle) -> String {
    let j = BundleJson {
        m: b.m,
        n: b.n,
        rank_target: b.rank_target,
        dims: b.tensor.dims(),
        slice_map: b
            .slice_map
            .iter()
            .map(|(v, k)| SliceEntry {
                var: v.clone(),
                slice: *k,
            })
            .collect(),
        constants_slice: b.constants_slice,
    };
    serde_json::to_string(&j).expect("bundle serializes")
}

/// Re-attaches metadata to a tensor, checking that the two agree.
pub fn read_bundle_meta(text: &str, tensor: Tensor) -> Result<TensorBundle, TensorError> {
    let j: BundleJson =
        serde_json::from_str(text).map_err(|e| TensorError::Malformed(e.to_string()))?;
    let bad = |m: &str| Err(TensorError::Malformed(m.to_string()));
    if j.dims != tensor.dims()
        || j.dims[0] != 3 * j.m
        || j.dims[1] != 3 * j.m
        || j.dims[2] != j.n + 1
    {
        return bad("bundle dimensions disagree with the tensor");
    }
    if j.rank_target != 2 * j.m + j.n || j.constants_slice != j.n || j.slice_map.len() != j.n {
        return bad("inconsistent bundle sizes");
    }
    if j.slice_map.iter().enumerate().any(|(k, e)| e.slice != k) {
        return bad("variable slices must come in order");
    }
    Ok(TensorBundle {
        tensor,
        slice_map: j.slice_map.into_iter().map(|e| (e.var, e.slice)).collect(),
        constants_slice: j.constants_slice,
        m: j.m,
        n: j.n,
        rank_target: j.rank_target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minrank::build_matrix;
    use crate::syslang::QuadraticSystem;

    fn constant_bundle(f: &FieldSpec) -> (SymbolicMatrix, TensorBundle) {
        let s = QuadraticSystem::from_named(&[("CONST", vec!["c"], Some(2))]).unwrap();
        let a = build_matrix(&s).unwrap();
        let b = build_tensor(&a, f);
        (a, b)
    }

    #[test]
    fn single_constant() {
        let f = FieldSpec::Prime(3);
        let (a, b) = constant_bundle(&f);
        assert_eq!(b.tensor.dims(), [3, 3, 2]);
        assert_eq!((b.m, b.n, b.rank_target), (1, 1, 3));
        let c = slice(&b.tensor, 3, 0).unwrap();
        assert_eq!(
            c,
            ConcreteMatrix::from_i64(3, 3, &[0, 0, 0, 0, 0, 0, 0, 0, 1], &f)
        );
        let k = slice(&b.tensor, 3, 1).unwrap();
        assert_eq!(
            k,
            ConcreteMatrix::from_i64(3, 3, &[1, 0, 2, 0, 1, 0, 1, 1, 0], &f)
        );
        assert!(check_slice_independence(&b));
        let mut sigma = Assignment::new();
        sigma.insert("c", f.from_i64(2));
        let e = expansion_from_assignment(&a, &b, &sigma, &f).unwrap();
        assert_eq!(e.len(), 3);
        assert!(verify_expansion(&b.tensor, &e).unwrap());
        sigma.insert("c", f.from_i64(1));
        assert!(matches!(
            expansion_from_assignment(&a, &b, &sigma, &f),
            Err(TensorError::RankTooHigh { rank: 3, bound: 2 })
        ));
    }

    #[test]
    fn empty_system() {
        let f = FieldSpec::Prime(2);
        let a = build_matrix(&QuadraticSystem::default()).unwrap();
        let b = build_tensor(&a, &f);
        assert_eq!(b.tensor.dims(), [0, 0, 1]);
        assert_eq!(b.rank_target, 0);
        assert!(check_slice_independence(&b));
    }

    #[test]
    fn duplicated_slice_is_dependent() {
        let f = FieldSpec::Prime(5);
        let (_, b) = constant_bundle(&f);
        let s = slice(&b.tensor, 3, 0).unwrap();
        let dup = Tensor::from_frontal_slices(3, 3, &[s.clone(), s.clone(), s], &f);
        let bad = TensorBundle {
            tensor: dup,
            slice_map: vec![("c".into(), 0), ("d".into(), 1)],
            constants_slice: 2,
            m: 1,
            n: 2,
            rank_target: 4,
        };
        assert!(!check_slice_independence(&bad));
    }

    #[test]
    fn metadata_round_trip() {
        let f = FieldSpec::Prime(7);
        let (_, b) = constant_bundle(&f);
        let text = write_bundle_meta(&b);
        assert_eq!(
            text,
            r#"{"m":1,"n":1,"rank_target":3,"dims":[3,3,2],"slice_map":[{"var":"c","slice":0}],"constants_slice":1}"#
        );
        assert_eq!(read_bundle_meta(&text, b.tensor.clone()).unwrap(), b);
        assert!(read_bundle_meta(&text, Tensor::zeros([3, 3, 3], &f)).is_err());
    }
}

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::affine::AffineExpr;
use super::MinrankError;
use crate::fields::{ConcreteMatrix, FieldElem, FieldSpec};
use crate::syslang::{check_assumptions, Assignment, Assumption, Equation, QuadraticSystem};

/// Rows and columns (0-based, increasing) of the diagonal blocks that contain
/// an original variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub var: String,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// The `j`-th (1-based) copy of an original variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyVar {
    pub name: String,
    pub base: String,
    pub j: usize,
}

/// Name of the `j`-th copy of `base`.
pub fn copy_name(base: &str, j: usize) -> String {
    format!("{base}~{j}")
}

/// A square matrix of affine expressions built from a quadratic system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicMatrix {
    m: usize,
    variables: Vec<String>,
    copies: Vec<CopyVar>,
    entries: Vec<AffineExpr>,
    occurrences: Vec<Occurrence>,
}

/// The 3x3 diagonal block for one equation.
pub fn build_block(e: &Equation, names: &[String]) -> [[AffineExpr; 3]; 3] {
    let v = |i: usize| AffineExpr::var(&names[i]);
    let k = |x: i64| AffineExpr::constant(x);
    let add_template = |a: AffineExpr, b: AffineExpr, c: AffineExpr| {
        [[k(1), k(0), a], [k(0), k(1), b], [k(1), k(1), c]]
    };
    match e {
        Equation::Add { c, a, b } => add_template(v(*a), v(*b), v(*c)),
        Equation::Mul { c, a, b } => [
            [k(1), k(0), v(*c)],
            [k(0), k(1), v(*a)],
            [k(-1), v(*b), k(0)],
        ],
        Equation::Copy { c, a } => add_template(v(*a), k(0), v(*c)),
        Equation::Const { c, k: konst } => {
            add_template(AffineExpr::constant(konst.clone()), k(0), v(*c))
        }
    }
}

/// Builds the matrix of a system satisfying A1 and A3. Violations of A2 are
/// tolerated: the construction is well defined without it, although the
/// solvability equivalence then may fail.
pub fn build_matrix(s: &QuadraticSystem) -> Result<SymbolicMatrix, MinrankError> {
    let blocking: Vec<_> = check_assumptions(s)
        .into_iter()
        .filter(|v| v.assumption != Assumption::A2)
        .collect();
    if !blocking.is_empty() {
        return Err(MinrankError::Assumptions(blocking));
    }
    let m = s.m();
    let dim = 3 * m;
    let mut entries = vec![AffineExpr::zero(); dim * dim];
    for (l, e) in s.equations.iter().enumerate() {
        let block = build_block(e, &s.variables);
        for (i, row) in block.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                entries[(3 * l + i) * dim + 3 * l + j] = x;
            }
        }
    }
    let counts = s.occurrence_counts();
    let originals: Vec<String> = (0..s.variables.len())
        .filter(|&v| counts[v] > 0)
        .map(|v| s.variables[v].clone())
        .collect();
    let mut occurrences = Vec::new();
    for u in &originals {
        let mut rows = BTreeSet::new();
        let mut cols = BTreeSet::new();
        for i in 0..dim {
            for j in 0..dim {
                if !entries[i * dim + j].coeff(u).is_zero() {
                    rows.insert(i);
                    cols.insert(j);
                }
            }
        }
        occurrences.push(Occurrence {
            var: u.clone(),
            rows: rows.into_iter().collect(),
            cols: cols.into_iter().collect(),
        });
    }
    let mut copies = Vec::new();
    for occ in &occurrences {
        let r = occ.rows.len();
        if r < 2 {
            continue;
        }
        for j in 0..r {
            let name = copy_name(&occ.var, j + 1);
            let entry = AffineExpr::var(&occ.var).sub(&AffineExpr::var(&name));
            for k in (0..r).filter(|&k| k != j) {
                entries[occ.rows[j] * dim + occ.cols[k]] = entry.clone();
            }
            copies.push(CopyVar {
                name,
                base: occ.var.clone(),
                j: j + 1,
            });
        }
    }
    let mut variables = originals;
    variables.extend(copies.iter().map(|c| c.name.clone()));
    Ok(SymbolicMatrix {
        m,
        variables,
        copies,
        entries,
        occurrences,
    })
}

impl SymbolicMatrix {
    /// Assembles a matrix from its parts, checking shapes and names.
    pub fn from_parts(
        m: usize,
        variables: Vec<String>,
        copies: Vec<CopyVar>,
        entries: Vec<AffineExpr>,
        occurrences: Vec<Occurrence>,
    ) -> Result<Self, MinrankError> {
        let dim = 3 * m;
        let bad = |msg: String| Err(MinrankError::Malformed(msg));
        if entries.len() != dim * dim {
            return bad(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            ));
        }
        let known: HashMap<&str, usize> = variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        if known.len() != variables.len() {
            return bad("duplicate variable".into());
        }
        let n_orig = variables.len() - copies.len().min(variables.len());
        for (i, c) in copies.iter().enumerate() {
            if variables.get(n_orig + i) != Some(&c.name)
                || !variables[..n_orig].contains(&c.base)
                || c.j == 0
            {
                return bad(format!("copy {:?} out of place", c.name));
            }
        }
        for e in &entries {
            if let Some(v) = e.terms().keys().find(|v| !known.contains_key(v.as_str())) {
                return bad(format!("entry mentions undeclared variable {v:?}"));
            }
        }
        if occurrences.len() != n_orig
            || occurrences.iter().zip(&variables).any(|(o, v)| &o.var != v)
        {
            return bad("occurrence lists must follow the original variables".into());
        }
        for o in &occurrences {
            let inc =
                |xs: &[usize]| xs.windows(2).all(|w| w[0] < w[1]) && xs.iter().all(|&x| x < dim);
            if o.rows.len() != o.cols.len() || !inc(&o.rows) || !inc(&o.cols) {
                return bad(format!("bad occurrence lists for {:?}", o.var));
            }
        }
        Ok(SymbolicMatrix {
            m,
            variables,
            copies,
            entries,
            occurrences,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        3 * self.m
    }

    /// Number of variables, originals and copies together.
    pub fn n(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn originals(&self) -> &[String] {
        &self.variables[..self.variables.len() - self.copies.len()]
    }

    pub fn copies(&self) -> &[CopyVar] {
        &self.copies
    }

    pub fn occurrences(&self) -> &[Occurrence] {
        &self.occurrences
    }

    pub fn occurrence(&self, var: &str) -> Option<&Occurrence> {
        self.occurrences.iter().find(|o| o.var == var)
    }

    pub fn entries(&self) -> &[AffineExpr] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &AffineExpr {
        &self.entries[i * self.dim() + j]
    }

    /// A copy with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, e: AffineExpr) -> Self {
        let mut out = self.clone();
        let d = self.dim();
        out.entries[i * d + j] = e;
        out
    }

    /// Coefficient matrix of `var` (`None` for the constant parts).
    pub fn coefficient_matrix(&self, var: Option<&str>, field: &FieldSpec) -> ConcreteMatrix {
        let d = self.dim();
        ConcreteMatrix::from_fn(d, d, |i, j| {
            let e = self.get(i, j);
            match var {
                Some(v) => field.from_int(&e.coeff(v)),
                None => field.from_int(e.constant_part()),
            }
        })
    }

    /// Assignment giving every copy the value of its base variable.
    pub fn propagate_copies(&self, sigma: &Assignment) -> Result<Assignment, MinrankError> {
        let mut out = Assignment::new();
        for v in self.originals() {
            let x = sigma
                .get(v)
                .ok_or_else(|| MinrankError::MissingVariable(v.clone()))?;
            out.insert(v.clone(), x.clone());
        }
        for c in &self.copies {
            let x = out.get(&c.base).cloned().expect("base assigned");
            out.insert(c.name.clone(), x);
        }
        Ok(out)
    }
}

impl fmt::Display for SymbolicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.dim();
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        let width = cells.iter().map(|c| c.len()).max().unwrap_or(1);
        for i in 0..d {
            let row: Vec<String> = (0..d)
                .map(|j| format!("{:>width$}", cells[i * d + j]))
                .collect();
            writeln!(f, "{}", row.join("  "))?;
        }
        Ok(())
    }
}

/// Checks the four structural facts of the construction directly on the
/// entry grid:
/// 1. each original `u` occurs exactly on `R_u x C_u`, always with coefficient 1;
/// 2. nonzero entries outside the diagonal blocks lie in the union of the `R_u x C_u`;
/// 3. the copy `u_j` occurs only in row `R_u[j]`, always with coefficient -1;
/// 4. dropping every third row and column leaves the identity.
pub fn verify_observation(a: &SymbolicMatrix) -> [bool; 4] {
    let d = a.dim();
    let mut grid_occ: HashMap<&str, (Vec<usize>, Vec<usize>)> = HashMap::new();
    let mut part1 = true;
    for u in a.originals() {
        let mut cells = BTreeSet::new();
        for i in 0..d {
            for j in 0..d {
                let c = a.get(i, j).coeff(u);
                if !c.is_zero() {
                    part1 &= c.is_one();
                    cells.insert((i, j));
                }
            }
        }
        let rows: Vec<usize> = cells
            .iter()
            .map(|&(i, _)| i)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let cols: Vec<usize> = cells
            .iter()
            .map(|&(_, j)| j)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        part1 &= cells.len() == rows.len() * cols.len();
        if let Some(o) = a.occurrence(u) {
            part1 &= o.rows == rows && o.cols == cols;
        }
        grid_occ.insert(u.as_str(), (rows, cols));
    }

    let mut part2 = true;
    for i in 0..d {
        for j in 0..d {
            if i / 3 == j / 3 || a.get(i, j).is_zero() {
                continue;
            }
            part2 &= grid_occ
                .values()
                .any(|(r, c)| r.contains(&i) && c.contains(&j));
        }
    }

    let mut part3 = true;
    for c in a.copies() {
        let row = grid_occ
            .get(c.base.as_str())
            .and_then(|(r, _)| r.get(c.j - 1).copied());
        for i in 0..d {
            for j in 0..d {
                let k = a.get(i, j).coeff(&c.name);
                if !k.is_zero() {
                    part3 &= Some(i) == row && k == -BigInt::one();
                }
            }
        }
    }

    let kept: Vec<usize> = (0..d).filter(|i| (i + 1) % 3 != 0).collect();
    let mut part4 = true;
    for (x, &i) in kept.iter().enumerate() {
        for (y, &j) in kept.iter().enumerate() {
            let want = AffineExpr::constant(if x == y { 1 } else { 0 });
            part4 &= *a.get(i, j) == want;
        }
    }
    [part1, part2, part3, part4]
}

/// Entrywise evaluation of `a` under `sigma` in `field`.
pub fn evaluate_matrix(
    a: &SymbolicMatrix,
    sigma: &Assignment,
    field: &FieldSpec,
) -> Result<ConcreteMatrix, MinrankError> {
    for v in a.variables() {
        match sigma.get(v) {
            None => return Err(MinrankError::MissingVariable(v.clone())),
            Some(x) if !field.contains(x) => {
                return Err(MinrankError::Malformed(format!(
                    "value of {v} is not in {field}"
                )))
            }
            _ => {}
        }
    }
    let d = a.dim();
    let entries = a
        .entries()
        .iter()
        .map(|e| e.eval(field, |n| sigma.get(n)))
        .collect::<Result<Vec<FieldElem>, _>>()?;
    Ok(ConcreteMatrix::new(d, d, entries).expect("square"))
}

#[derive(Serialize, Deserialize)]
struct SymbolicJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<FieldSpec>,
    m: usize,
    dim: usize,
    variables: Vec<String>,
    copies: Vec<CopyVar>,
    occurrences: Vec<Occurrence>,
    entries: Vec<Value>,
}

/// Serializes a symbolic matrix, optionally tagged with a field.
pub fn write_symbolic(a: &SymbolicMatrix, field: Option<&FieldSpec>) -> String {
    let j = SymbolicJson {
        field: field.cloned(),
        m: a.m,
        dim: a.dim(),
        variables: a.variables.clone(),
        copies: a.copies.clone(),
        occurrences: a.occurrences.clone(),
        entries: a.entries.iter().map(AffineExpr::to_json).collect(),
    };
    serde_json::to_string(&j).expect("matrix serializes")
}

pub fn read_symbolic(text: &str) -> Result<(SymbolicMatrix, Option<FieldSpec>), MinrankError> {
    let j: SymbolicJson =
        serde_json::from_str(text).map_err(|e| MinrankError::Malformed(e.to_string()))?;
    if j.dim != 3 * j.m {
        return Err(MinrankError::Malformed(format!(
            "dim {} is not 3m for m = {}",
            j.dim, j.m
        )));
    }
    let entries = j
        .entries
        .iter()
        .map(AffineExpr::from_json)
        .collect::<Result<Vec<_>, _>>()?;
    let a = SymbolicMatrix::from_parts(j.m, j.variables, j.copies, entries, j.occurrences)?;
    Ok((a, j.field))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(eqs: &[(&str, Vec<&str>, Option<i64>)]) -> QuadraticSystem {
        QuadraticSystem::from_named(eqs).unwrap()
    }

    fn block_strings(e: &Equation, names: &[String]) -> Vec<String> {
        build_block(e, names)
            .iter()
            .flatten()
            .map(|x| x.to_string())
            .collect()
    }

    #[test]
    fn blocks() {
        let s = sys(&[
            ("CONST", vec!["c"], Some(2)),
            ("MUL", vec!["u", "x", "y"], None),
            ("COPY", vec!["y", "x"], None),
            ("ADD", vec!["c", "a", "b"], None),
        ]);
        let b = |i: usize| block_strings(&s.equations[i], &s.variables).join(" ");
        assert_eq!(b(0), "1 0 2 0 1 0 1 1 c");
        assert_eq!(b(1), "1 0 u 0 1 x -1 y 0");
        assert_eq!(b(2), "1 0 x 0 1 0 1 1 y");
        assert_eq!(b(3), "1 0 a 0 1 b 1 1 c");
    }

    #[test]
    fn single_constant() {
        let a = build_matrix(&sys(&[("CONST", vec!["c"], Some(2))])).unwrap();
        assert_eq!((a.dim(), a.n()), (3, 1));
        assert_eq!(a.variables(), ["c"]);
        assert!(a.copies().is_empty());
        assert_eq!(verify_observation(&a), [true; 4]);
    }

    #[test]
    fn two_copies() {
        let a = build_matrix(&sys(&[
            ("COPY", vec!["y", "x"], None),
            ("COPY", vec!["x", "z"], None),
        ]))
        .unwrap();
        let x = a.occurrence("x").unwrap();
        assert_eq!((x.rows.clone(), x.cols.clone()), (vec![0, 5], vec![2, 5]));
        assert_eq!(a.get(0, 5).to_string(), "x - x~1");
        assert_eq!(a.get(5, 2).to_string(), "x - x~2");
        assert_eq!(a.variables(), ["y", "x", "z", "x~1", "x~2"]);
        assert_eq!(verify_observation(&a), [true; 4]);
    }

    #[test]
    fn stray_entry_breaks_part_two() {
        let a = build_matrix(&sys(&[
            ("COPY", vec!["y", "x"], None),
            ("COPY", vec!["x", "z"], None),
        ]))
        .unwrap();
        let bad = a.with_entry(1, 4, AffineExpr::constant(1));
        assert!(!verify_observation(&bad)[1]);
        let bad = a.with_entry(
            0,
            5,
            AffineExpr::var("x").sub(&AffineExpr::term("x~1", BigInt::from(2))),
        );
        assert!(!verify_observation(&bad)[2]);
    }

    #[test]
    fn empty_system() {
        let a = build_matrix(&QuadraticSystem::default()).unwrap();
        assert_eq!((a.dim(), a.n()), (0, 0));
        assert_eq!(verify_observation(&a), [true; 4]);
    }

    #[test]
    fn requires_a1_and_a3() {
        assert!(build_matrix(&sys(&[("MUL", vec!["t", "x", "x"], None)])).is_err());
        let e = build_matrix(&sys(&[("MUL", vec!["w", "u", "v"], None)])).unwrap_err();
        assert!(matches!(e, MinrankError::Assumptions(ref v) if v[0].assumption == Assumption::A3));
    }

    #[test]
    fn evaluation() {
        let a = build_matrix(&sys(&[("CONST", vec!["c"], Some(2))])).unwrap();
        let q = FieldSpec::Rationals;
        let mut sigma = Assignment::new();
        sigma.insert("c", q.from_i64(2));
        let m = evaluate_matrix(&a, &sigma, &q).unwrap();
        assert_eq!(crate::fields::matrix_rank(&m, &q), 2);
        assert!(matches!(
            evaluate_matrix(&a, &Assignment::new(), &q),
            Err(MinrankError::MissingVariable(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let a = build_matrix(&sys(&[
            ("MUL", vec!["u", "x", "y"], None),
            ("COPY", vec!["y", "x"], None),
            ("CONST", vec!["u"], Some(2)),
        ]))
        .unwrap();
        let f = FieldSpec::Prime(7);
        let text = write_symbolic(&a, Some(&f));
        assert_eq!(read_symbolic(&text).unwrap(), (a.clone(), Some(f)));
        let broken = text.replace("\"dim\":9", "\"dim\":8");
        assert!(read_symbolic(&broken).is_err());
    }
}

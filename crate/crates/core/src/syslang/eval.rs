use rayon::prelude::*;

use super::system::{Assignment, Equation, QuadraticSystem};
use super::SysError;
use crate::budget::check_space;
use crate::fields::{FieldElem, FieldSpec};

/// Whether every equation holds under `sigma`.
pub fn eval_system(
    s: &QuadraticSystem,
    sigma: &Assignment,
    field: &FieldSpec,
) -> Result<bool, SysError> {
    let vals = sigma.values_in(&s.variables)?;
    for v in &vals {
        if !field.contains(v) {
            return Err(SysError::Malformed(format!("value {v} is not in {field}")));
        }
    }
    Ok(s.equations.iter().all(|e| holds(e, &vals, field)))
}

fn holds(e: &Equation, x: &[FieldElem], f: &FieldSpec) -> bool {
    match e {
        Equation::Add { c, a, b } => x[*c] == f.add(&x[*a], &x[*b]),
        Equation::Mul { c, a, b } => x[*c] == f.mul(&x[*a], &x[*b]),
        Equation::Copy { c, a } => x[*c] == x[*a],
        Equation::Const { c, k } => x[*c] == f.from_int(k),
    }
}

/// An equation with residues precomputed for a fixed prime.
#[derive(Clone, Copy)]
enum Compiled {
    Add(usize, usize, usize),
    Mul(usize, usize, usize),
    Copy(usize, usize),
    Const(usize, u64),
}

impl Compiled {
    fn holds(self, x: &[u64], p: u64) -> bool {
        match self {
            Compiled::Add(c, a, b) => x[c] == (x[a] + x[b]) % p,
            Compiled::Mul(c, a, b) => x[c] == x[a] * x[b] % p,
            Compiled::Copy(c, a) => x[c] == x[a],
            Compiled::Const(c, k) => x[c] == k,
        }
    }
}

struct Search {
    p: u64,
    n: usize,
    /// Equations grouped by their highest variable index.
    checks: Vec<Vec<Compiled>>,
}

impl Search {
    fn new(s: &QuadraticSystem, p: u64) -> Self {
        let field = FieldSpec::Prime(p);
        let mut checks = vec![Vec::new(); s.variables.len()];
        for e in &s.equations {
            let c = match e {
                Equation::Add { c, a, b } => Compiled::Add(*c, *a, *b),
                Equation::Mul { c, a, b } => Compiled::Mul(*c, *a, *b),
                Equation::Copy { c, a } => Compiled::Copy(*c, *a),
                Equation::Const { c, k } => match field.from_int(k) {
                    FieldElem::Residue(r) => Compiled::Const(*c, r),
                    _ => unreachable!(),
                },
            };
            let last = *e
                .slots()
                .iter()
                .max()
                .expect("every equation has a variable");
            checks[last].push(c);
        }
        Search {
            p,
            n: s.variables.len(),
            checks,
        }
    }

    /// Lexicographically least completion of `x[..depth]`.
    fn extend(&self, x: &mut Vec<u64>, depth: usize) -> bool {
        if depth == self.n {
            return true;
        }
        for r in 0..self.p {
            x[depth] = r;
            if self.checks[depth].iter().all(|c| c.holds(x, self.p)) && self.extend(x, depth + 1) {
                return true;
            }
        }
        false
    }
}

/// Lexicographically least solution over GF(p) (variable order, residues
/// ascending), or `None` if the system has no solution.
pub fn solve_bruteforce(
    s: &QuadraticSystem,
    field: &FieldSpec,
    budget: u64,
) -> Result<Option<Assignment>, SysError> {
    let FieldSpec::Prime(p) = *field else {
        return Err(SysError::NotPrimeField(field.clone()));
    };
    check_space(p, s.variables.len(), budget)?;
    let search = Search::new(s, p);
    if search.n == 0 {
        return Ok(Some(Assignment::new()));
    }
    let found = (0..p).into_par_iter().find_map_first(|r| {
        let mut x = vec![0u64; search.n];
        x[0] = r;
        let ok = search.checks[0].iter().all(|c| c.holds(&x, p)) && search.extend(&mut x, 1);
        ok.then_some(x)
    });
    Ok(found.map(|x| {
        let vals: Vec<FieldElem> = x.into_iter().map(FieldElem::Residue).collect();
        Assignment::from_values(&s.variables, &vals)
    }))
}

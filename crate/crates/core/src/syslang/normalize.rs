//! Structural assumptions on quadratic systems and the rewriting that
//! establishes them.
//!
//! * A1: no variable occurs twice in one equation.
//! * A2: two distinct equations share at most one variable.
//! * A3: for every `MUL(w, u, v)`, `v` occurs in exactly two equations and the
//!   other one is a `COPY` with `v` on its left-hand side.
//!
//! Rewrites only add `COPY` equations, inserted directly before the equation
//! that triggered them. Violations are repaired in the order A1, A2, A3.

use std::collections::HashSet;
use std::fmt;

use super::quadratize::fresh_name;
use super::system::{Equation, QuadraticSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Assumption {
    A1,
    A2,
    A3,
}

/// One violated assumption. Equation indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub assumption: Assumption,
    pub equations: Vec<usize>,
    pub variables: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eqs: Vec<String> = self
            .equations
            .iter()
            .map(|i| format!("e{}", i + 1))
            .collect();
        write!(
            f,
            "{:?} violated at {} on {}",
            self.assumption,
            eqs.join(", "),
            self.variables.join(", ")
        )
    }
}

fn repeated(e: &Equation) -> Vec<usize> {
    let mut seen = Vec::new();
    let mut reps = Vec::new();
    for v in e.slots() {
        if seen.contains(&v) {
            if !reps.contains(&v) {
                reps.push(v);
            }
        } else {
            seen.push(v);
        }
    }
    reps
}

fn shared(e: &Equation, f: &Equation) -> Vec<usize> {
    let mut out = Vec::new();
    for v in f.slots() {
        if e.mentions(v) && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Whether the multiplier `v` of the `MUL` at index `i` satisfies A3.
fn multiplier_ok(s: &QuadraticSystem, i: usize, v: usize) -> bool {
    let others: Vec<usize> = (0..s.m())
        .filter(|&j| j != i && s.equations[j].mentions(v))
        .collect();
    match others.as_slice() {
        [j] => matches!(s.equations[*j], Equation::Copy { c, .. } if c == v),
        _ => false,
    }
}

/// Lists every violation of A1, A2 and A3; empty means the system passes.
pub fn check_assumptions(s: &QuadraticSystem) -> Vec<Violation> {
    let names = |vs: &[usize]| {
        vs.iter()
            .map(|&v| s.name(v).to_string())
            .collect::<Vec<_>>()
    };
    let mut out = Vec::new();
    for (i, e) in s.equations.iter().enumerate() {
        for v in repeated(e) {
            out.push(Violation {
                assumption: Assumption::A1,
                equations: vec![i],
                variables: names(&[v]),
            });
        }
    }
    for j in 0..s.m() {
        for i in 0..j {
            let sh = shared(&s.equations[i], &s.equations[j]);
            if sh.len() > 1 {
                out.push(Violation {
                    assumption: Assumption::A2,
                    equations: vec![i, j],
                    variables: names(&sh),
                });
            }
        }
    }
    for (i, e) in s.equations.iter().enumerate() {
        if let Equation::Mul { b, .. } = *e {
            if !multiplier_ok(s, i, b) {
                out.push(Violation {
                    assumption: Assumption::A3,
                    equations: vec![i],
                    variables: names(&[b]),
                });
            }
        }
    }
    out
}

struct Rewriter {
    sys: QuadraticSystem,
    taken: HashSet<String>,
}

impl Rewriter {
    fn fresh_copy_of(&mut self, v: usize) -> usize {
        let name = fresh_name(self.sys.name(v), &self.taken);
        self.taken.insert(name.clone());
        self.sys.intern(&name)
    }

    /// Inserts `COPY(v', src)` at `at` and returns `v'`.
    fn insert_copy(&mut self, at: usize, src: usize, of: usize) -> usize {
        let fresh = self.fresh_copy_of(of);
        self.sys
            .equations
            .insert(at, Equation::Copy { c: fresh, a: src });
        fresh
    }

    fn fix_a1(&mut self) {
        let mut i = 0;
        while i < self.sys.m() {
            let slots = self.sys.equations[i].slots();
            let mut first_copy: Vec<(usize, usize)> = Vec::new();
            let mut seen = Vec::new();
            let mut replacement = slots.clone();
            let mut inserted = 0;
            for (pos, &v) in slots.iter().enumerate() {
                if !seen.contains(&v) {
                    seen.push(v);
                    continue;
                }
                // the first repeat goes through two copies so that the new
                // equations share only one variable with this one
                let w = match first_copy.iter().find(|(x, _)| *x == v) {
                    None => {
                        let hop = self.insert_copy(i + inserted, v, v);
                        inserted += 1;
                        let w = self.insert_copy(i + inserted, hop, v);
                        inserted += 1;
                        first_copy.push((v, hop));
                        w
                    }
                    Some(&(_, hop)) => {
                        let w = self.insert_copy(i + inserted, hop, v);
                        inserted += 1;
                        w
                    }
                };
                replacement[pos] = w;
            }
            let e = &mut self.sys.equations[i + inserted];
            for (slot, v) in e.slots_mut().into_iter().zip(replacement) {
                *slot = v;
            }
            i += inserted + 1;
        }
    }

    fn fix_a2(&mut self) {
        'outer: loop {
            for j in 0..self.sys.m() {
                for i in 0..j {
                    let sh = shared(&self.sys.equations[i], &self.sys.equations[j]);
                    if sh.len() < 2 {
                        continue;
                    }
                    let mut at = j;
                    for &v in &sh[1..] {
                        let w = self.insert_copy(at, v, v);
                        at += 1;
                        for slot in self.sys.equations[at].slots_mut() {
                            if *slot == v {
                                *slot = w;
                            }
                        }
                    }
                    continue 'outer;
                }
            }
            return;
        }
    }

    fn fix_a3(&mut self) {
        let mut i = 0;
        while i < self.sys.m() {
            if let Equation::Mul { b, .. } = self.sys.equations[i] {
                if !multiplier_ok(&self.sys, i, b) {
                    let w = self.insert_copy(i, b, b);
                    i += 1;
                    if let Equation::Mul { b: slot, .. } = &mut self.sys.equations[i] {
                        *slot = w;
                    }
                }
            }
            i += 1;
        }
    }
}

/// Rewrites `s` into an equisolvable system satisfying A1, A2 and A3.
/// Systems that already pass are returned unchanged.
pub fn normalize(s: &QuadraticSystem) -> QuadraticSystem {
    let mut r = Rewriter {
        sys: s.clone(),
        taken: s.variables.iter().cloned().collect(),
    };
    r.fix_a1();
    r.fix_a2();
    r.fix_a3();
    r.sys
}

/// Like [`normalize`] but repairs only the listed assumptions, in the order
/// A1, A2, A3.
pub fn normalize_only(s: &QuadraticSystem, which: &[Assumption]) -> QuadraticSystem {
    let mut r = Rewriter {
        sys: s.clone(),
        taken: s.variables.iter().cloned().collect(),
    };
    if which.contains(&Assumption::A1) {
        r.fix_a1();
    }
    if which.contains(&Assumption::A2) {
        r.fix_a2();
    }
    if which.contains(&Assumption::A3) {
        r.fix_a3();
    }
    r.sys
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(eqs: &[(&str, Vec<&str>, Option<i64>)]) -> QuadraticSystem {
        QuadraticSystem::from_named(eqs).unwrap()
    }

    #[test]
    fn repeated_factor() {
        let s = sys(&[("MUL", vec!["t", "x", "x"], None)]);
        let v = check_assumptions(&s);
        assert_eq!(
            v[0],
            Violation {
                assumption: Assumption::A1,
                equations: vec![0],
                variables: vec!["x".into()]
            }
        );
        let n = normalize(&s);
        assert_eq!(
            n.to_string(),
            "COPY(x#1, x)\nCOPY(x#2, x#1)\nMUL(t, x, x#2)\n"
        );
        assert!(check_assumptions(&n).is_empty());
    }

    #[test]
    fn triple_repeat() {
        let n = normalize(&sys(&[("ADD", vec!["x", "x", "x"], None)]));
        assert_eq!(
            n.to_string(),
            "COPY(x#1, x)\nCOPY(x#2, x#1)\nCOPY(x#3, x#1)\nADD(x, x#2, x#3)\n"
        );
        assert!(check_assumptions(&n).is_empty());
    }

    #[test]
    fn partial_repair() {
        let s = sys(&[
            ("MUL", vec!["u", "x", "y"], None),
            ("COPY", vec!["y", "x"], None),
            ("CONST", vec!["u"], Some(2)),
        ]);
        let n = normalize_only(&s, &[Assumption::A1, Assumption::A3]);
        assert_eq!(n, s);
        assert_eq!(
            normalize_only(&s, &[Assumption::A1, Assumption::A2, Assumption::A3]),
            normalize(&s)
        );
        let t = sys(&[("MUL", vec!["t", "x", "x"], None)]);
        let n = normalize_only(&t, &[Assumption::A1, Assumption::A3]);
        assert!(check_assumptions(&n).is_empty());
    }

    #[test]
    fn fixed_point() {
        let s = sys(&[("COPY", vec!["y", "x"], None)]);
        assert!(check_assumptions(&s).is_empty());
        assert_eq!(normalize(&s), s);
    }

    #[test]
    fn shared_pair() {
        let s = sys(&[
            ("MUL", vec!["w", "u", "v"], None),
            ("MUL", vec!["w2", "u", "v"], None),
        ]);
        let v = check_assumptions(&s);
        assert!(v.iter().any(|x| x.assumption == Assumption::A2
            && x.equations == vec![0, 1]
            && x.variables == vec!["u".to_string(), "v".to_string()]));
        assert!(v
            .iter()
            .any(|x| x.assumption == Assumption::A3 && x.variables == vec!["v".to_string()]));
        let n = normalize(&s);
        assert!(check_assumptions(&n).is_empty());
    }

    #[test]
    fn worked_example_shares_two_variables() {
        let s = sys(&[
            ("MUL", vec!["u", "x", "y"], None),
            ("COPY", vec!["y", "x"], None),
            ("CONST", vec!["u"], Some(2)),
        ]);
        let v = check_assumptions(&s);
        assert_eq!(
            v,
            vec![Violation {
                assumption: Assumption::A2,
                equations: vec![0, 1],
                variables: vec!["y".into(), "x".into()]
            }]
        );
        let n = normalize(&s);
        assert_eq!(
            n.to_string(),
            "MUL(u, x, y)\nCOPY(x#1, x)\nCOPY(y, x#1)\nCONST(u, 2)\n"
        );
        assert!(check_assumptions(&n).is_empty());
        assert_eq!(normalize(&n), n);
    }

    #[test]
    fn multiplier_without_copy() {
        let s = sys(&[
            ("MUL", vec!["w", "u", "v"], None),
            ("CONST", vec!["v"], Some(3)),
        ]);
        let n = normalize(&s);
        assert_eq!(n.to_string(), "COPY(v#1, v)\nMUL(w, u, v#1)\nCONST(v, 3)\n");
        assert_eq!(n.variables, vec!["w", "u", "v", "v#1"]);
    }
}

//! Reduction of polynomial equations to `ADD`/`MUL`/`COPY`/`CONST` form.
//!
//! Every intermediate value gets a fresh variable `t#k` that is defined by
//! exactly one equation, so solutions of the two systems correspond.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::One;

use super::poly::{PolyFormula, Polynomial};
use super::system::{Equation, QuadraticSystem};

/// Picks `root#k` with the least `k >= 1` not in `taken`.
pub(crate) fn fresh_name(root: &str, taken: &HashSet<String>) -> String {
    let root = root.split('#').next().unwrap_or(root);
    (1..)
        .map(|k| format!("{root}#{k}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded")
}

struct Builder {
    sys: QuadraticSystem,
    taken: HashSet<String>,
}

impl Builder {
    fn fresh(&mut self) -> usize {
        let name = fresh_name("t", &self.taken);
        self.taken.insert(name.clone());
        self.sys.intern(&name)
    }

    fn emit(&mut self, e: Equation) {
        self.sys.equations.push(e);
    }

    /// A variable holding the value of `p`.
    fn value(&mut self, p: &Polynomial) -> usize {
        if let Some(v) = p.as_variable() {
            return v;
        }
        let t = self.fresh();
        self.define(p, t);
        t
    }

    /// Emits equations forcing `target = p`.
    fn define(&mut self, p: &Polynomial, target: usize) {
        if let Some(k) = p.as_constant() {
            self.emit(Equation::Const { c: target, k });
            return;
        }
        if let Some(v) = p.as_variable() {
            self.emit(Equation::Copy { c: target, a: v });
            return;
        }
        let terms = p.terms();
        if terms.len() > 1 {
            let first = Polynomial::from_terms([terms[0].clone()]);
            let rest = Polynomial::from_terms(terms[1..].iter().cloned());
            let a = self.value(&first);
            let b = self.value(&rest);
            self.emit(Equation::Add { c: target, a, b });
            return;
        }
        let (coef, mono) = terms.into_iter().next().expect("nonzero");
        if !coef.is_one() {
            let k = self.fresh();
            self.emit(Equation::Const { c: k, k: coef });
            let m = self.value(&Polynomial::from_terms([(BigInt::one(), mono)]));
            self.emit(Equation::Mul {
                c: target,
                a: k,
                b: m,
            });
            return;
        }
        let (v, e) = mono[0];
        let (left, right) = if mono.len() > 1 {
            (vec![(v, e)], mono[1..].to_vec())
        } else {
            (vec![(v, e / 2)], vec![(v, e - e / 2)])
        };
        let a = self.value(&Polynomial::from_terms([(BigInt::one(), left)]));
        let b = self.value(&Polynomial::from_terms([(BigInt::one(), right)]));
        self.emit(Equation::Mul { c: target, a, b });
    }

    fn equation(&mut self, lhs: &Polynomial, rhs: &Polynomial) {
        let (lv, rv) = (lhs.as_variable(), rhs.as_variable());
        let (lk, rk) = (lhs.as_constant(), rhs.as_constant());
        match (lv, rv, lk, rk) {
            (Some(x), Some(y), _, _) => {
                if x != y {
                    self.emit(Equation::Copy { c: x, a: y });
                }
            }
            (Some(x), None, _, _) => self.define(rhs, x),
            (None, Some(y), _, _) => self.define(lhs, y),
            (_, _, Some(a), Some(b)) => {
                if a != b {
                    // unsatisfiable: one variable forced to two distinct constants
                    let t = self.fresh();
                    self.emit(Equation::Const { c: t, k: a });
                    self.emit(Equation::Const { c: t, k: b });
                }
            }
            (_, _, None, Some(k)) => {
                let t = self.value(lhs);
                self.emit(Equation::Const { c: t, k });
            }
            (_, _, Some(k), None) => {
                let t = self.value(rhs);
                self.emit(Equation::Const { c: t, k });
            }
            (_, _, None, None) => {
                let t = self.value(lhs);
                self.define(rhs, t);
            }
        }
    }
}

/// Rewrites a polynomial formula as an equisolvable quadratic system. The
/// original variables keep their order and come first.
pub fn quadratize(f: &PolyFormula) -> QuadraticSystem {
    let mut b = Builder {
        sys: QuadraticSystem {
            variables: f.variables.clone(),
            equations: Vec::new(),
        },
        taken: f.variables.iter().cloned().collect(),
    };
    for (l, r) in &f.equations {
        b.equation(l, r);
    }
    b.sys
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_source;
    use super::*;

    fn q(src: &str) -> String {
        quadratize(&parse_source(src).unwrap()).to_string()
    }

    #[test]
    fn square_equals_constant() {
        assert_eq!(q("eq x^2 = 2;"), "MUL(t#1, x, x)\nCONST(t#1, 2)\n");
    }

    #[test]
    fn constant_assignment() {
        assert_eq!(q("eq x = 1;"), "CONST(x, 1)\n");
    }

    #[test]
    fn affine_product() {
        assert_eq!(
            q("eq u = x*y + 3;"),
            "MUL(t#1, x, y)\nCONST(t#2, 3)\nADD(u, t#1, t#2)\n"
        );
    }

    #[test]
    fn worked_example_is_direct() {
        assert_eq!(
            q("eq u = x*y; eq y = x; eq u = 2;"),
            "MUL(u, x, y)\nCOPY(y, x)\nCONST(u, 2)\n"
        );
    }

    #[test]
    fn coefficients_and_powers() {
        assert_eq!(q("eq y = 3*x;"), "CONST(t#1, 3)\nMUL(y, t#1, x)\n");
        assert_eq!(q("eq y = x^3;"), "MUL(t#1, x, x)\nMUL(y, x, t#1)\n");
        assert_eq!(q("eq x*y = z;"), "MUL(z, x, y)\n");
    }

    #[test]
    fn trivial_and_contradictory() {
        assert_eq!(q("eq x = x;"), "");
        assert_eq!(q("eq 1 = 1;"), "");
        assert_eq!(q("eq 1 = 2;"), "CONST(t#1, 1)\nCONST(t#1, 2)\n");
    }

    #[test]
    fn fresh_names_avoid_sources() {
        let taken: HashSet<String> = ["t#1".to_string(), "t#2".to_string()].into();
        assert_eq!(fresh_name("t", &taken), "t#3");
        assert_eq!(fresh_name("x#4", &taken), "x#1");
    }
}

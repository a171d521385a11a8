use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::SysError;
use crate::fields::json::{elem_from_json, elem_to_json, int_from_json, int_to_json};
use crate::fields::{FieldElem, FieldSpec};

/// One equation of a quadratic system; variables are indices into the
/// system's variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Equation {
    /// `c = a + b`
    Add { c: usize, a: usize, b: usize },
    /// `c = a * b`
    Mul { c: usize, a: usize, b: usize },
    /// `c = a`
    Copy { c: usize, a: usize },
    /// `c = k`
    Const { c: usize, k: BigInt },
}

impl Equation {
    pub fn kind(&self) -> &'static str {
        match self {
            Equation::Add { .. } => "ADD",
            Equation::Mul { .. } => "MUL",
            Equation::Copy { .. } => "COPY",
            Equation::Const { .. } => "CONST",
        }
    }

    /// Variables in slot order `c, a, b`.
    pub fn slots(&self) -> Vec<usize> {
        match *self {
            Equation::Add { c, a, b } | Equation::Mul { c, a, b } => vec![c, a, b],
            Equation::Copy { c, a } => vec![c, a],
            Equation::Const { c, .. } => vec![c],
        }
    }

    pub fn slots_mut(&mut self) -> Vec<&mut usize> {
        match self {
            Equation::Add { c, a, b } | Equation::Mul { c, a, b } => vec![c, a, b],
            Equation::Copy { c, a } => vec![c, a],
            Equation::Const { c, .. } => vec![c],
        }
    }

    pub fn mentions(&self, v: usize) -> bool {
        self.slots().contains(&v)
    }

    fn map_vars(&self, f: impl Fn(usize) -> usize) -> Equation {
        let mut e = self.clone();
        for s in e.slots_mut() {
            *s = f(*s);
        }
        e
    }
}

/// An ordered list of `ADD`, `MUL`, `COPY` and `CONST` equations over a
/// variable table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuadraticSystem {
    pub variables: Vec<String>,
    pub equations: Vec<Equation>,
}

impl QuadraticSystem {
    /// Builds a system from equations over variable names, registering
    /// variables in order of first mention.
    pub fn from_named(eqs: &[(&str, Vec<&str>, Option<i64>)]) -> Result<Self, SysError> {
        let mut s = QuadraticSystem::default();
        for (kind, vars, k) in eqs {
            let ids: Vec<usize> = vars.iter().map(|v| s.intern(v)).collect();
            let eq = match (*kind, ids.as_slice(), k) {
                ("ADD", &[c, a, b], None) => Equation::Add { c, a, b },
                ("MUL", &[c, a, b], None) => Equation::Mul { c, a, b },
                ("COPY", &[c, a], None) => Equation::Copy { c, a },
                ("CONST", &[c], Some(k)) => Equation::Const {
                    c,
                    k: BigInt::from(*k),
                },
                _ => return Err(SysError::Malformed(format!("bad equation {kind} {vars:?}"))),
            };
            s.equations.push(eq);
        }
        Ok(s)
    }

    /// Index of `name`, adding it to the variable table if new.
    pub fn intern(&mut self, name: &str) -> usize {
        match self.variables.iter().position(|v| v == name) {
            Some(i) => i,
            None => {
                self.variables.push(name.to_string());
                self.variables.len() - 1
            }
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn m(&self) -> usize {
        self.equations.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.variables[v]
    }

    /// Number of equations mentioning each variable.
    pub fn occurrence_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.variables.len()];
        for e in &self.equations {
            for v in e.slots() {
                counts[v] += 1;
            }
        }
        counts
    }

    pub fn display_equation(&self, e: &Equation) -> String {
        let n = |v: usize| self.variables[v].as_str();
        match e {
            Equation::Add { c, a, b } => format!("ADD({}, {}, {})", n(*c), n(*a), n(*b)),
            Equation::Mul { c, a, b } => format!("MUL({}, {}, {})", n(*c), n(*a), n(*b)),
            Equation::Copy { c, a } => format!("COPY({}, {})", n(*c), n(*a)),
            Equation::Const { c, k } => format!("CONST({}, {k})", n(*c)),
        }
    }

    fn validate(&self) -> Result<(), SysError> {
        let mut seen = HashMap::new();
        for (i, v) in self.variables.iter().enumerate() {
            if v.is_empty() {
                return Err(SysError::Malformed("empty variable name".into()));
            }
            if seen.insert(v.as_str(), i).is_some() {
                return Err(SysError::Malformed(format!("duplicate variable {v:?}")));
            }
        }
        for e in &self.equations {
            if e.slots().iter().any(|&v| v >= self.variables.len()) {
                return Err(SysError::Malformed(format!("equation {e:?} out of range")));
            }
        }
        Ok(())
    }

    /// Reorders the variable table: new variable `i` is old variable `order[i]`.
    pub fn with_order(&self, order: &[usize]) -> QuadraticSystem {
        let mut pos = vec![usize::MAX; self.variables.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        QuadraticSystem {
            variables: order.iter().map(|&o| self.variables[o].clone()).collect(),
            equations: self
                .equations
                .iter()
                .map(|e| e.map_vars(|v| pos[v]))
                .collect(),
        }
    }
}

impl fmt::Display for QuadraticSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.equations {
            writeln!(f, "{}", self.display_equation(e))?;
        }
        Ok(())
    }
}

/// Values for named variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<String, FieldElem>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: FieldElem) {
        self.values.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<&FieldElem> {
        self.values.get(name)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &FieldElem)> {
        self.values.iter()
    }

    /// Values listed in `order`, failing on the first missing name.
    pub fn values_in(&self, order: &[String]) -> Result<Vec<FieldElem>, SysError> {
        order
            .iter()
            .map(|v| {
                self.get(v)
                    .cloned()
                    .ok_or_else(|| SysError::MissingVariable(v.clone()))
            })
            .collect()
    }

    pub fn from_values(order: &[String], values: &[FieldElem]) -> Self {
        let mut a = Assignment::new();
        for (n, v) in order.iter().zip(values) {
            a.insert(n.clone(), v.clone());
        }
        a
    }

    /// Human-readable `name = value` list in `order`.
    pub fn describe(&self, order: &[String]) -> String {
        order
            .iter()
            .filter_map(|n| self.get(n).map(|v| format!("{n}={v}")))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Serialize, Deserialize)]
struct EquationJson {
    kind: String,
    c: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<Value>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<FieldSpec>,
    variables: Vec<String>,
    equations: Vec<EquationJson>,
}

/// Serializes a system, optionally tagging it with the field it targets.
pub fn write_system(s: &QuadraticSystem, field: Option<&FieldSpec>) -> String {
    let n = |v: usize| s.variables[v].clone();
    let equations = s
        .equations
        .iter()
        .map(|e| {
            let (a, b, k) = match e {
                Equation::Add { a, b, .. } | Equation::Mul { a, b, .. } => {
                    (Some(n(*a)), Some(n(*b)), None)
                }
                Equation::Copy { a, .. } => (Some(n(*a)), None, None),
                Equation::Const { k, .. } => (None, None, Some(int_to_json(k))),
            };
            EquationJson {
                kind: e.kind().into(),
                c: n(e.slots()[0]),
                a,
                b,
                k,
            }
        })
        .collect();
    let j = SystemJson {
        field: field.cloned(),
        variables: s.variables.clone(),
        equations,
    };
    serde_json::to_string(&j).expect("system serializes")
}

/// Parses a system file; the embedded field, if any, is returned alongside.
pub fn read_system(text: &str) -> Result<(QuadraticSystem, Option<FieldSpec>), SysError> {
    let j: SystemJson =
        serde_json::from_str(text).map_err(|e| SysError::Malformed(e.to_string()))?;
    let s = QuadraticSystem {
        variables: j.variables,
        equations: Vec::new(),
    };
    let mut s = s;
    s.validate()?;
    for e in &j.equations {
        let idx = |name: &Option<String>, slot: &str| -> Result<usize, SysError> {
            let name = name.as_ref().ok_or_else(|| {
                SysError::Malformed(format!("{} equation lacks `{slot}`", e.kind))
            })?;
            s.index_of(name)
                .ok_or_else(|| SysError::UnknownVariable(name.clone()))
        };
        let c = idx(&Some(e.c.clone()), "c")?;
        let extra = |present: bool, slot: &str| -> Result<(), SysError> {
            if present {
                Err(SysError::Malformed(format!(
                    "{} equation has unexpected `{slot}`",
                    e.kind
                )))
            } else {
                Ok(())
            }
        };
        let eq = match e.kind.as_str() {
            "ADD" | "MUL" => {
                extra(e.k.is_some(), "k")?;
                let (a, b) = (idx(&e.a, "a")?, idx(&e.b, "b")?);
                if e.kind == "ADD" {
                    Equation::Add { c, a, b }
                } else {
                    Equation::Mul { c, a, b }
                }
            }
            "COPY" => {
                extra(e.b.is_some() || e.k.is_some(), "b/k")?;
                Equation::Copy {
                    c,
                    a: idx(&e.a, "a")?,
                }
            }
            "CONST" => {
                extra(e.a.is_some() || e.b.is_some(), "a/b")?;
                let k =
                    e.k.as_ref()
                        .ok_or_else(|| SysError::Malformed("CONST lacks `k`".into()))?;
                Equation::Const {
                    c,
                    k: int_from_json(k).map_err(|e| SysError::Malformed(e.to_string()))?,
                }
            }
            other => {
                return Err(SysError::Malformed(format!(
                    "unknown equation kind {other:?}"
                )))
            }
        };
        s.equations.push(eq);
    }
    Ok((s, j.field))
}

#[derive(Serialize, Deserialize)]
struct AssignmentJson {
    field: FieldSpec,
    values: BTreeMap<String, Value>,
}

pub fn write_assignment(a: &Assignment, field: &FieldSpec) -> String {
    let values = a
        .iter()
        .map(|(k, v)| (k.clone(), elem_to_json(v)))
        .collect();
    serde_json::to_string(&AssignmentJson {
        field: field.clone(),
        values,
    })
    .expect("serializes")
}

pub fn read_assignment(text: &str) -> Result<(Assignment, FieldSpec), SysError> {
    let j: AssignmentJson =
        serde_json::from_str(text).map_err(|e| SysError::Malformed(e.to_string()))?;
    let mut a = Assignment::new();
    for (k, v) in &j.values {
        let e = elem_from_json(v, &j.field).map_err(|e| SysError::Malformed(e.to_string()))?;
        a.insert(k.clone(), e);
    }
    Ok((a, j.field))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> QuadraticSystem {
        QuadraticSystem::from_named(&[
            ("MUL", vec!["u", "x", "y"], None),
            ("COPY", vec!["y", "x"], None),
            ("CONST", vec!["u"], Some(2)),
        ])
        .unwrap()
    }

    #[test]
    fn display_and_slots() {
        let s = example();
        assert_eq!(s.to_string(), "MUL(u, x, y)\nCOPY(y, x)\nCONST(u, 2)\n");
        assert_eq!(s.equations[0].slots(), vec![0, 1, 2]);
        assert_eq!(s.occurrence_counts(), vec![2, 2, 2]);
    }

    #[test]
    fn json_round_trip() {
        let s = example();
        let f = FieldSpec::Prime(7);
        let text = write_system(&s, Some(&f));
        assert_eq!(read_system(&text).unwrap(), (s.clone(), Some(f)));
        let bare = write_system(&s, None);
        assert!(!bare.contains("field"));
        assert_eq!(read_system(&bare).unwrap().0, s);
    }

    #[test]
    fn json_errors() {
        let unknown = r#"{"variables":["x"],"equations":[{"kind":"COPY","c":"x","a":"z"}]}"#;
        assert_eq!(
            read_system(unknown).unwrap_err(),
            SysError::UnknownVariable("z".into())
        );
        let bad_kind = r#"{"variables":["x"],"equations":[{"kind":"DIV","c":"x"}]}"#;
        assert!(read_system(bad_kind).is_err());
        let dup = r#"{"variables":["x","x"],"equations":[]}"#;
        assert!(read_system(dup).is_err());
        let stray = r#"{"variables":["x"],"equations":[{"kind":"CONST","c":"x","k":1,"a":"x"}]}"#;
        assert!(read_system(stray).is_err());
    }

    #[test]
    fn big_constants_round_trip() {
        let mut s = QuadraticSystem::default();
        let c = s.intern("c");
        let k: BigInt = "-98765432109876543210".parse().unwrap();
        s.equations.push(Equation::Const { c, k });
        assert_eq!(read_system(&write_system(&s, None)).unwrap().0, s);
    }

    #[test]
    fn assignment_round_trip() {
        let f = FieldSpec::Quadratic(2);
        let mut a = Assignment::new();
        a.insert("x", f.sqrt_d().unwrap());
        a.insert("u", f.from_i64(2));
        let (b, g) = read_assignment(&write_assignment(&a, &f)).unwrap();
        assert_eq!((b, g), (a, f));
    }
}

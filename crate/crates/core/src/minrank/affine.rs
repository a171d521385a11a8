use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use super::MinrankError;
use crate::fields::json::{int_from_json, int_to_json};
use crate::fields::{FieldElem, FieldSpec};

/// `constant + sum coeff * var` with integer coefficients and no zero terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AffineExpr {
    constant: BigInt,
    terms: BTreeMap<String, BigInt>,
}

impl AffineExpr {
    pub fn zero() -> Self {
        AffineExpr::default()
    }

    pub fn constant(k: impl Into<BigInt>) -> Self {
        AffineExpr {
            constant: k.into(),
            terms: BTreeMap::new(),
        }
    }

    pub fn var(name: &str) -> Self {
        AffineExpr::term(name, BigInt::one())
    }

    pub fn term(name: &str, coeff: BigInt) -> Self {
        let mut e = AffineExpr::zero();
        e.add_term(name, coeff);
        e
    }

    pub fn constant_part(&self) -> &BigInt {
        &self.constant
    }

    pub fn terms(&self) -> &BTreeMap<String, BigInt> {
        &self.terms
    }

    pub fn coeff(&self, name: &str) -> BigInt {
        self.terms.get(name).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, name: &str, coeff: BigInt) {
        let slot = self
            .terms
            .entry(name.to_string())
            .or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(name);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.clone();
        e.constant += &other.constant;
        for (v, c) in &other.terms {
            e.add_term(v, c.clone());
        }
        e
    }

    pub fn neg(&self) -> Self {
        AffineExpr {
            constant: -&self.constant,
            terms: self.terms.iter().map(|(v, c)| (v.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Evaluates in `field` with variable values supplied by `value`.
    pub fn eval<'a>(
        &self,
        field: &FieldSpec,
        value: impl Fn(&str) -> Option<&'a FieldElem>,
    ) -> Result<FieldElem, MinrankError> {
        let mut acc = field.from_int(&self.constant);
        for (v, c) in &self.terms {
            let x = value(v).ok_or_else(|| MinrankError::MissingVariable(v.clone()))?;
            acc = field.add(&acc, &field.mul(&field.from_int(c), x));
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        let mut terms = Map::new();
        for (v, c) in &self.terms {
            terms.insert(v.clone(), int_to_json(c));
        }
        let mut obj = Map::new();
        obj.insert("const".into(), int_to_json(&self.constant));
        obj.insert("terms".into(), Value::Object(terms));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self, MinrankError> {
        let bad = |msg: &str| MinrankError::Malformed(format!("{msg} in entry {v}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        if obj.keys().any(|k| k != "const" && k != "terms") {
            return Err(bad("unexpected key"));
        }
        let constant = match obj.get("const") {
            Some(c) => int_from_json(c).map_err(|_| bad("bad constant"))?,
            None => BigInt::zero(),
        };
        let mut e = AffineExpr::constant(constant);
        if let Some(t) = obj.get("terms") {
            let t = t
                .as_object()
                .ok_or_else(|| bad("terms must be an object"))?;
            for (name, c) in t {
                let c = int_from_json(c).map_err(|_| bad("bad coefficient"))?;
                if c.is_zero() {
                    return Err(bad("zero coefficient"));
                }
                e.add_term(name, c);
            }
        }
        Ok(e)
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{a}*{v}")?;
            }
            first = false;
        }
        if first {
            return write!(f, "{}", self.constant);
        }
        if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() {
                "-"
            } else {
                "+"
            };
            write!(f, " {sign} {}", self.constant.abs())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let e = AffineExpr::var("u").sub(&AffineExpr::var("u~1"));
        assert_eq!(e.to_string(), "u - u~1");
        assert_eq!(e.coeff("u~1"), BigInt::from(-1));
        assert!(e.sub(&e).is_zero());
        assert_eq!(AffineExpr::constant(-1).to_string(), "-1");
        assert_eq!(
            AffineExpr::var("x")
                .add(&AffineExpr::constant(-2))
                .to_string(),
            "x - 2"
        );
    }

    #[test]
    fn evaluation() {
        let f = FieldSpec::Prime(7);
        let e = AffineExpr::var("u")
            .sub(&AffineExpr::var("v"))
            .add(&AffineExpr::constant(10));
        let vals: BTreeMap<String, FieldElem> = [
            ("u".to_string(), f.from_i64(1)),
            ("v".to_string(), f.from_i64(6)),
        ]
        .into();
        assert_eq!(e.eval(&f, |n| vals.get(n)).unwrap(), f.from_i64(5));
        assert!(matches!(
            AffineExpr::var("w").eval(&f, |n| vals.get(n)),
            Err(MinrankError::MissingVariable(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let e = AffineExpr::var("x")
            .sub(&AffineExpr::var("x~1"))
            .add(&AffineExpr::constant(3));
        assert_eq!(
            e.to_json().to_string(),
            r#"{"const":3,"terms":{"x":1,"x~1":-1}}"#
        );
        assert_eq!(AffineExpr::from_json(&e.to_json()).unwrap(), e);
        assert!(
            AffineExpr::from_json(&serde_json::json!({"const": 1, "terms": {"x": 0}})).is_err()
        );
        assert!(AffineExpr::from_json(&serde_json::json!({"konst": 1})).is_err());
    }
}

//! JSON encodings of fields, elements and matrices.
//!
//! Field objects are `{"kind":"gfp","p":5}`, `{"kind":"q"}` or
//! `{"kind":"qsqrt","d":2}`. GF(p) entries are integers in `[0, p)`, rational
//! entries are strings `"num/den"` in lowest terms, and quadratic-field entries
//! are two-element arrays `["a", "b"]` meaning `a + b sqrt(d)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ConcreteMatrix, FieldElem, FieldError, FieldSpec};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind")]
pub(crate) enum FieldJson {
    #[serde(rename = "gfp")]
    Gfp { p: u64 },
    #[serde(rename = "q")]
    Q,
    #[serde(rename = "qsqrt")]
    QSqrt { d: u64 },
}

impl TryFrom<FieldJson> for FieldSpec {
    type Error = FieldError;

    fn try_from(j: FieldJson) -> Result<Self, Self::Error> {
        let f = match j {
            FieldJson::Gfp { p } => FieldSpec::Prime(p),
            FieldJson::Q => FieldSpec::Rationals,
            FieldJson::QSqrt { d } => FieldSpec::Quadratic(d),
        };
        f.validate()?;
        Ok(f)
    }
}

impl From<FieldSpec> for FieldJson {
    fn from(f: FieldSpec) -> Self {
        match f {
            FieldSpec::Prime(p) => FieldJson::Gfp { p },
            FieldSpec::Rationals => FieldJson::Q,
            FieldSpec::Quadratic(d) => FieldJson::QSqrt { d },
        }
    }
}

fn ratio_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn parse_ratio(s: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::NonCanonical(format!("rational entry {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let n_body = n.strip_prefix('-').unwrap_or(n);
    if !digits(n_body) || !digits(d) {
        return Err(bad());
    }
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = d.parse().map_err(|_| bad())?;
    if !den.is_positive() {
        return Err(if den == BigInt::from(0) {
            FieldError::ZeroDenominator
        } else {
            bad()
        });
    }
    if !num.gcd(&den).is_one() {
        return Err(bad());
    }
    Ok(BigRational::new_raw(num, den))
}

pub fn elem_to_json(e: &FieldElem) -> Value {
    match e {
        FieldElem::Residue(r) => Value::from(*r),
        FieldElem::Rational(q) => Value::String(ratio_string(q)),
        FieldElem::Quadratic(a, b) => Value::Array(vec![
            Value::String(ratio_string(a)),
            Value::String(ratio_string(b)),
        ]),
    }
}

/// Decodes a canonical element of `field`; non-canonical encodings are rejected.
pub fn elem_from_json(v: &Value, field: &FieldSpec) -> Result<FieldElem, FieldError> {
    match (field, v) {
        (FieldSpec::Prime(p), Value::Number(n)) => match n.as_u64() {
            Some(r) if r < *p => Ok(FieldElem::Residue(r)),
            _ => Err(FieldError::NonCanonical(format!("residue {n} in gf{p}"))),
        },
        (FieldSpec::Rationals, Value::String(s)) => Ok(FieldElem::Rational(parse_ratio(s)?)),
        (FieldSpec::Quadratic(_), Value::Array(parts)) if parts.len() == 2 => {
            match (&parts[0], &parts[1]) {
                (Value::String(a), Value::String(b)) => {
                    Ok(FieldElem::Quadratic(parse_ratio(a)?, parse_ratio(b)?))
                }
                _ => Err(FieldError::NonCanonical(format!("quadratic entry {v}"))),
            }
        }
        _ => Err(FieldError::NotInField(format!("{v} in {field}"))),
    }
}

/// Integers are JSON numbers when they fit in `i64`, decimal strings otherwise.
pub fn int_to_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(n.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> Result<BigInt, FieldError> {
    let bad = || FieldError::Json(format!("expected an integer, found {v}"));
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(bad),
        Value::String(s) => {
            let body = s.strip_prefix('-').unwrap_or(s);
            if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            s.parse().map_err(|_| bad())
        }
        _ => Err(bad()),
    }
}

pub fn vec_to_json(v: &[FieldElem]) -> Vec<Value> {
    v.iter().map(elem_to_json).collect()
}

pub fn vec_from_json(v: &[Value], field: &FieldSpec) -> Result<Vec<FieldElem>, FieldError> {
    v.iter().map(|e| elem_from_json(e, field)).collect()
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Value>,
}

fn matrix_json(m: &ConcreteMatrix, field: &FieldSpec) -> MatrixJson {
    MatrixJson {
        rows: m.rows(),
        cols: m.cols(),
        field: field.clone(),
        entries: vec_to_json(m.entries()),
    }
}

pub fn matrix_to_json(m: &ConcreteMatrix, field: &FieldSpec) -> Value {
    serde_json::to_value(matrix_json(m, field)).expect("matrix serializes")
}

pub fn matrix_from_json(v: &Value) -> Result<(ConcreteMatrix, FieldSpec), FieldError> {
    let j: MatrixJson =
        serde_json::from_value(v.clone()).map_err(|e| FieldError::Json(e.to_string()))?;
    let entries = vec_from_json(&j.entries, &j.field)?;
    Ok((ConcreteMatrix::new(j.rows, j.cols, entries)?, j.field))
}

pub fn write_matrix(m: &ConcreteMatrix, field: &FieldSpec) -> String {
    serde_json::to_string(&matrix_json(m, field)).expect("matrix serializes")
}

pub fn read_matrix(text: &str) -> Result<(ConcreteMatrix, FieldSpec), FieldError> {
    let v: Value = serde_json::from_str(text).map_err(|e| FieldError::Json(e.to_string()))?;
    matrix_from_json(&v)
}

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use serde::{Deserialize, Serialize};

use super::json::FieldJson;
use super::FieldError;

/// Largest admissible prime modulus.
pub const MAX_PRIME: u64 = 1 << 31;

/// The field all arithmetic of a computation happens in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldJson", into = "FieldJson")]
pub enum FieldSpec {
    /// GF(p) for a prime `p < 2^31`.
    Prime(u64),
    /// The rationals.
    Rationals,
    /// Q(sqrt d) for a square-free `d >= 2`.
    Quadratic(u64),
}

/// An element of a [`FieldSpec`], always stored in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElem {
    Residue(u64),
    Rational(BigRational),
    /// `a + b sqrt(d)`.
    Quadratic(BigRational, BigRational),
}

/// Unreduced input accepted by [`normalize_elem`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawElem {
    Int(BigInt),
    Ratio(BigInt, BigInt),
    /// `(a_num/a_den) + (b_num/b_den) sqrt(d)`.
    Pair((BigInt, BigInt), (BigInt, BigInt)),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

pub fn is_square_free(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n;
    let mut f = 2u64;
    while f * f <= m {
        if m % f == 0 {
            m /= f;
            if m % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    true
}

fn ratio(num: &BigInt, den: &BigInt) -> Result<BigRational, FieldError> {
    if den.is_zero() {
        return Err(FieldError::ZeroDenominator);
    }
    Ok(BigRational::new(num.clone(), den.clone()))
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        let f = FieldSpec::Prime(p);
        f.validate()?;
        Ok(f)
    }

    pub fn quadratic(d: u64) -> Result<Self, FieldError> {
        let f = FieldSpec::Quadratic(d);
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        match *self {
            FieldSpec::Prime(p) if p >= MAX_PRIME || !is_prime(p) => Err(FieldError::NotPrime(p)),
            FieldSpec::Quadratic(d) if d < 2 || !is_square_free(d) => {
                Err(FieldError::NotSquareFree(d))
            }
            _ => Ok(()),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            FieldSpec::Prime(p) => Some(p),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.modulus().unwrap_or(0)
    }

    pub fn is_prime_field(&self) -> bool {
        matches!(self, FieldSpec::Prime(_))
    }

    pub fn zero(&self) -> FieldElem {
        match self {
            FieldSpec::Prime(_) => FieldElem::Residue(0),
            FieldSpec::Rationals => FieldElem::Rational(BigRational::zero()),
            FieldSpec::Quadratic(_) => {
                FieldElem::Quadratic(BigRational::zero(), BigRational::zero())
            }
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        self.from_int(&BigInt::from(v))
    }

    /// Image of an integer under the canonical ring map Z -> F.
    pub fn from_int(&self, v: &BigInt) -> FieldElem {
        match self {
            FieldSpec::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                FieldElem::Residue(r.to_u64().expect("residue fits in u64"))
            }
            FieldSpec::Rationals => FieldElem::Rational(BigRational::from_integer(v.clone())),
            FieldSpec::Quadratic(_) => {
                FieldElem::Quadratic(BigRational::from_integer(v.clone()), BigRational::zero())
            }
        }
    }

    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem, FieldError> {
        match self {
            FieldSpec::Prime(_) => {
                if den.is_zero() {
                    return Err(FieldError::ZeroDenominator);
                }
                let d = self.from_int(den);
                let inv = self.inv(&d).ok_or(FieldError::ZeroDenominator)?;
                Ok(self.mul(&self.from_int(num), &inv))
            }
            FieldSpec::Rationals => Ok(FieldElem::Rational(ratio(num, den)?)),
            FieldSpec::Quadratic(_) => {
                Ok(FieldElem::Quadratic(ratio(num, den)?, BigRational::zero()))
            }
        }
    }

    /// The element `sqrt(d)` of a quadratic field.
    pub fn sqrt_d(&self) -> Option<FieldElem> {
        match self {
            FieldSpec::Quadratic(_) => Some(FieldElem::Quadratic(
                BigRational::zero(),
                BigRational::one(),
            )),
            _ => None,
        }
    }

    /// Whether `e` is a canonical element of this field.
    pub fn contains(&self, e: &FieldElem) -> bool {
        match (self, e) {
            (FieldSpec::Prime(p), FieldElem::Residue(r)) => r < p,
            (FieldSpec::Rationals, FieldElem::Rational(_)) => true,
            (FieldSpec::Quadratic(_), FieldElem::Quadratic(_, _)) => true,
            _ => false,
        }
    }

    pub fn is_zero(&self, e: &FieldElem) -> bool {
        match e {
            FieldElem::Residue(r) => *r == 0,
            FieldElem::Rational(q) => q.is_zero(),
            FieldElem::Quadratic(a, b) => a.is_zero() && b.is_zero(),
        }
    }

    pub fn add(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        match (self, x, y) {
            (FieldSpec::Prime(p), FieldElem::Residue(a), FieldElem::Residue(b)) => {
                FieldElem::Residue((a + b) % p)
            }
            (_, FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a + b),
            (_, FieldElem::Quadratic(a, b), FieldElem::Quadratic(c, d)) => {
                FieldElem::Quadratic(a + c, b + d)
            }
            _ => mismatch(self, x, y),
        }
    }

    pub fn neg(&self, x: &FieldElem) -> FieldElem {
        match (self, x) {
            (FieldSpec::Prime(p), FieldElem::Residue(a)) => FieldElem::Residue((p - a) % p),
            (_, FieldElem::Rational(a)) => FieldElem::Rational(-a),
            (_, FieldElem::Quadratic(a, b)) => FieldElem::Quadratic(-a, -b),
            _ => mismatch(self, x, x),
        }
    }

    pub fn sub(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        match (self, x, y) {
            (FieldSpec::Prime(p), FieldElem::Residue(a), FieldElem::Residue(b)) => {
                FieldElem::Residue(a * b % p)
            }
            (_, FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a * b),
            (FieldSpec::Quadratic(d), FieldElem::Quadratic(a, b), FieldElem::Quadratic(c, e)) => {
                let d = BigRational::from_integer(BigInt::from(*d));
                FieldElem::Quadratic(a * c + d * b * e, a * e + b * c)
            }
            _ => mismatch(self, x, y),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, x: &FieldElem) -> Option<FieldElem> {
        if self.is_zero(x) {
            return None;
        }
        Some(match (self, x) {
            (FieldSpec::Prime(p), FieldElem::Residue(a)) => {
                FieldElem::Residue(super::gfp::inv_mod(*a, *p))
            }
            (_, FieldElem::Rational(a)) => FieldElem::Rational(a.recip()),
            (FieldSpec::Quadratic(d), FieldElem::Quadratic(a, b)) => {
                // (a + b r)^-1 = (a - b r) / (a^2 - d b^2); the norm is nonzero as d is not a square
                let d = BigRational::from_integer(BigInt::from(*d));
                let norm = a * a - d * b * b;
                FieldElem::Quadratic(a / &norm, -(b / &norm))
            }
            _ => mismatch(self, x, x),
        })
    }

    pub fn div(&self, x: &FieldElem, y: &FieldElem) -> Option<FieldElem> {
        self.inv(y).map(|yi| self.mul(x, &yi))
    }

    /// Galois conjugation `a + b sqrt(d) -> a - b sqrt(d)`; identity on other fields.
    pub fn conj(&self, x: &FieldElem) -> FieldElem {
        match x {
            FieldElem::Quadratic(a, b) => FieldElem::Quadratic(a.clone(), -b),
            other => other.clone(),
        }
    }

    pub fn pow(&self, x: &FieldElem, mut e: u64) -> FieldElem {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

#[cold]
fn mismatch(f: &FieldSpec, x: &FieldElem, y: &FieldElem) -> ! {
    panic!("field elements {x:?}, {y:?} do not belong to {f}")
}

/// Reduces a raw integer, fraction or pair into the canonical element of `field`.
pub fn normalize_elem(raw: &RawElem, field: &FieldSpec) -> Result<FieldElem, FieldError> {
    field.validate()?;
    match raw {
        RawElem::Int(v) => Ok(field.from_int(v)),
        RawElem::Ratio(n, d) => field.from_ratio(n, d),
        RawElem::Pair((an, ad), (bn, bd)) => match field {
            FieldSpec::Quadratic(_) => Ok(FieldElem::Quadratic(ratio(an, ad)?, ratio(bn, bd)?)),
            _ => Err(FieldError::NotInField(format!(
                "pair ({an}/{ad}, {bn}/{bd}) in {field}"
            ))),
        },
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "gf{p}"),
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Quadratic(d) => write!(f, "qsqrt{d}"),
        }
    }
}

/// Parses the command-line field syntax `gf<p>`, `q`, `qsqrt<d>`.
impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FieldError::BadFieldFlag(s.to_string());
        let f = if s == "q" {
            FieldSpec::Rationals
        } else if let Some(d) = s.strip_prefix("qsqrt") {
            FieldSpec::Quadratic(d.parse().map_err(|_| bad())?)
        } else if let Some(p) = s.strip_prefix("gf") {
            FieldSpec::Prime(p.parse().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        f.validate()?;
        Ok(f)
    }
}

fn fmt_ratio(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Residue(r) => write!(f, "{r}"),
            FieldElem::Rational(q) => write!(f, "{}", fmt_ratio(q)),
            FieldElem::Quadratic(a, b) => {
                if b.is_zero() {
                    write!(f, "{}", fmt_ratio(a))
                } else {
                    let sign = if b.is_negative() { "-" } else { "+" };
                    write!(
                        f,
                        "{} {} {}*sqrt(d)",
                        fmt_ratio(a),
                        sign,
                        fmt_ratio(&b.abs())
                    )
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn reduces_integers_mod_p() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(
            normalize_elem(&RawElem::Int(big(7)), &f).unwrap(),
            FieldElem::Residue(2)
        );
        assert_eq!(
            normalize_elem(&RawElem::Int(big(-1)), &f).unwrap(),
            FieldElem::Residue(4)
        );
    }

    #[test]
    fn reduces_fractions() {
        let q = FieldSpec::Rationals;
        let half = normalize_elem(&RawElem::Ratio(big(2), big(4)), &q).unwrap();
        assert_eq!(half, FieldElem::Rational(BigRational::new(big(1), big(2))));
        let neg = normalize_elem(&RawElem::Ratio(big(3), big(-6)), &q).unwrap();
        assert_eq!(neg, FieldElem::Rational(BigRational::new(big(-1), big(2))));
    }

    #[test]
    fn reduces_quadratic_pairs() {
        let f = FieldSpec::quadratic(2).unwrap();
        let e = normalize_elem(&RawElem::Pair((big(2), big(4)), (big(-3), big(6))), &f).unwrap();
        let half = BigRational::new(big(1), big(2));
        assert_eq!(e, FieldElem::Quadratic(half.clone(), -half));
    }

    #[test]
    fn rejects_bad_inputs() {
        let q = FieldSpec::Rationals;
        assert_eq!(
            normalize_elem(&RawElem::Ratio(big(1), big(0)), &q),
            Err(FieldError::ZeroDenominator)
        );
        assert_eq!(
            normalize_elem(&RawElem::Int(big(1)), &FieldSpec::Quadratic(8)),
            Err(FieldError::NotSquareFree(8))
        );
        assert_eq!(FieldSpec::prime(9), Err(FieldError::NotPrime(9)));
        assert!(FieldSpec::prime(2_147_483_647).is_ok());
        assert!(FieldSpec::quadratic(1).is_err());
        let gf3 = FieldSpec::prime(3).unwrap();
        assert_eq!(
            normalize_elem(&RawElem::Ratio(big(1), big(3)), &gf3),
            Err(FieldError::ZeroDenominator)
        );
    }

    #[test]
    fn quadratic_inverse_and_sqrt() {
        let f = FieldSpec::quadratic(2).unwrap();
        let r = f.sqrt_d().unwrap();
        assert_eq!(f.mul(&r, &r), f.from_i64(2));
        let x = f.add(&f.from_i64(3), &r);
        let xi = f.inv(&x).unwrap();
        assert_eq!(f.mul(&x, &xi), f.one());
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn parses_field_flags() {
        assert_eq!("gf7".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(7));
        assert_eq!("q".parse::<FieldSpec>().unwrap(), FieldSpec::Rationals);
        assert_eq!(
            "qsqrt5".parse::<FieldSpec>().unwrap(),
            FieldSpec::Quadratic(5)
        );
        assert!("gf8".parse::<FieldSpec>().is_err());
        assert!("qsqrt4".parse::<FieldSpec>().is_err());
        assert!("r".parse::<FieldSpec>().is_err());
    }
}

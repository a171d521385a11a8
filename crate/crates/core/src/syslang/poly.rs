use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A monomial as `(variable index, exponent)` pairs, sorted by variable,
/// exponents positive. The empty monomial is the constant 1.
pub type Monomial = Vec<(usize, u32)>;

/// Integer-coefficient polynomial in expanded normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: BTreeMap<usize, u32> = a.iter().copied().collect();
    for &(v, e) in b {
        *out.entry(v).or_insert(0) += e;
    }
    out.into_iter().collect()
}

pub fn mono_degree(m: &Monomial) -> u64 {
    m.iter().map(|&(_, e)| e as u64).sum()
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(v: usize) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(vec![(v, 1)], BigInt::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    /// Terms ordered by total degree (highest first), then by monomial.
    pub fn terms(&self) -> Vec<(BigInt, Monomial)> {
        let mut out: Vec<(BigInt, Monomial)> = self
            .terms
            .iter()
            .map(|(m, c)| (c.clone(), m.clone()))
            .collect();
        out.sort_by(|a, b| {
            mono_degree(&b.1)
                .cmp(&mono_degree(&a.1))
                .then_with(|| a.1.cmp(&b.1))
        });
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (BigInt, Monomial)>) -> Self {
        let mut p = Polynomial::zero();
        for (c, m) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// The variable index, if the polynomial is exactly one variable.
    pub fn as_variable(&self) -> Option<usize> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        match m.as_slice() {
            [(v, 1)] if c.is_one() => Some(*v),
            _ => None,
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().flat_map(|m| m.iter().map(|&(v, _)| v))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                p.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        p
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Evaluates with `value(v)` supplying variable values in any commutative ring.
    pub fn eval<T: Clone>(
        &self,
        value: impl Fn(usize) -> T,
        from_int: impl Fn(&BigInt) -> T,
        add: impl Fn(&T, &T) -> T,
        mul: impl Fn(&T, &T) -> T,
    ) -> T {
        let mut acc = from_int(&BigInt::zero());
        for (m, c) in &self.terms {
            let mut t = from_int(c);
            for &(v, e) in m {
                let x = value(v);
                for _ in 0..e {
                    t = mul(&t, &x);
                }
            }
            acc = add(&acc, &t);
        }
        acc
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { p: self, names }
    }
}

struct PolyDisplay<'a> {
    p: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.p.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, m)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            let mut parts = Vec::new();
            if !a.is_one() || m.is_empty() {
                parts.push(a.to_string());
            }
            for &(v, e) in m {
                if e == 1 {
                    parts.push(self.names[v].clone());
                } else {
                    parts.push(format!("{}^{e}", self.names[v]));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// A conjunction of polynomial equations `lhs = rhs` over named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFormula {
    /// Variable names in first-mention order.
    pub variables: Vec<String>,
    pub equations: Vec<(Polynomial, Polynomial)>,
}

impl fmt::Display for PolyFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, r) in &self.equations {
            writeln!(
                f,
                "eq {} = {};",
                l.display(&self.variables),
                r.display(&self.variables)
            )?;
        }
        Ok(())
    }
}

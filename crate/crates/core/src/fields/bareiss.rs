//! Fraction-free (Bareiss) elimination over Z and Z[sqrt d].
//!
//! Rational and quadratic-field matrices are first scaled row by row to clear
//! denominators; row scaling by nonzero integers does not change the rank.
//! Every intermediate entry is a minor of the scaled matrix, so the division
//! by the previous pivot is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) trait Domain: Clone {
    fn vanishes(&self) -> bool;
    fn one_like(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    /// `self / by`, where the quotient is known to exist in the domain.
    fn div_exact(&self, by: &Self) -> Self;
}

impl Domain for BigInt {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn div_exact(&self, by: &Self) -> Self {
        debug_assert!((self % by).vanishes());
        self / by
    }
}

/// `a + b sqrt(d)` with integer parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    pub d: u64,
}

impl Domain for QuadInt {
    fn vanishes(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn one_like(&self) -> Self {
        QuadInt {
            a: BigInt::one(),
            b: BigInt::zero(),
            d: self.d,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        let d = BigInt::from(self.d);
        QuadInt {
            a: &self.a * &o.a + d * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        }
    }
    fn sub(&self, o: &Self) -> Self {
        QuadInt {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            d: self.d,
        }
    }
    fn div_exact(&self, by: &Self) -> Self {
        // x / y = x * conj(y) / N(y) with N(y) a nonzero integer
        let conj = QuadInt {
            a: by.a.clone(),
            b: -by.b.clone(),
            d: by.d,
        };
        let norm = &by.a * &by.a - BigInt::from(by.d) * &by.b * &by.b;
        let num = self.mul(&conj);
        debug_assert!((&num.a % &norm).is_zero() && (&num.b % &norm).vanishes());
        QuadInt {
            a: num.a / &norm,
            b: num.b / &norm,
            d: self.d,
        }
    }
}

/// Rank of a row-major matrix by fraction-free elimination. The buffer is destroyed.
pub(crate) fn rank<T: Domain>(buf: &mut [T], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    let mut prev: Option<T> = None;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !buf[r * cols + col].vanishes()) else {
            continue;
        };
        if piv != rank {
            for c in 0..cols {
                buf.swap(piv * cols + c, rank * cols + c);
            }
        }
        let pivot = buf[rank * cols + col].clone();
        let prev_pivot = prev.clone().unwrap_or_else(|| pivot.one_like());
        for r in rank + 1..rows {
            let lead = buf[r * cols + col].clone();
            for c in col + 1..cols {
                let v = pivot
                    .mul(&buf[r * cols + c])
                    .sub(&lead.mul(&buf[rank * cols + c]));
                buf[r * cols + c] = v.div_exact(&prev_pivot);
            }
            buf[r * cols + col] = lead.sub(&lead);
        }
        prev = Some(pivot);
        rank += 1;
    }
    rank
}

fn lcm_of_denoms<'a>(it: impl Iterator<Item = &'a BigRational>) -> BigInt {
    it.fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Scales each row of a rational matrix to integers.
pub(crate) fn integer_rows(entries: &[BigRational], rows: usize, cols: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let row = &entries[r * cols..(r + 1) * cols];
        let l = lcm_of_denoms(row.iter());
        out.extend(row.iter().map(|q| (q * &l).to_integer()));
    }
    out
}

/// Scales each row of a quadratic-field matrix into Z[sqrt d].
pub(crate) fn quad_integer_rows(
    entries: &[(BigRational, BigRational)],
    rows: usize,
    cols: usize,
    d: u64,
) -> Vec<QuadInt> {
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let row = &entries[r * cols..(r + 1) * cols];
        let l = lcm_of_denoms(row.iter().flat_map(|(a, b)| [a, b]));
        out.extend(row.iter().map(|(a, b)| QuadInt {
            a: (a * &l).to_integer(),
            b: (b * &l).to_integer(),
            d,
        }));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn integer_rank() {
        assert_eq!(rank(&mut ints(&[1, 0, 2, 0, 1, 0, 1, 1, 2]), 3, 3), 2);
        assert_eq!(rank(&mut ints(&[2, 4, 1, 2]), 2, 2), 1);
        assert_eq!(rank(&mut ints(&[0, 0, 0, 0, 3, 6]), 2, 3), 1);
        assert_eq!(rank(&mut ints(&[1, 2, 3, 4, 5, 6, 7, 8, 10]), 3, 3), 3);
    }

    #[test]
    fn quadratic_rank() {
        // [[1, r], [r, 2]] is singular over Q(sqrt 2)
        let q = |a: i64, b: i64| QuadInt {
            a: a.into(),
            b: b.into(),
            d: 2,
        };
        let mut m = vec![q(1, 0), q(0, 1), q(0, 1), q(2, 0)];
        assert_eq!(rank(&mut m, 2, 2), 1);
        let mut m = vec![q(1, 0), q(0, 1), q(0, 1), q(3, 0)];
        assert_eq!(rank(&mut m, 2, 2), 2);
    }
}

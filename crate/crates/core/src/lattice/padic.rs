//! p-adic square classes of rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn strip(x: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut v = 0;
    let mut x = x.clone();
    while !x.is_zero() && x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    (v, x)
}

/// p-adic valuation and unit part (as an integer coprime to p, up to the
/// square of the denominator) of a nonzero rational.
fn split(a: &BigRational, p: u64) -> (i64, BigInt) {
    let pb = BigInt::from(p);
    let (vn, n) = strip(a.numer(), &pb);
    let (vd, d) = strip(a.denom(), &pb);
    // n/d has the same square class as n·d
    (vn - vd, n * d)
}

/// Is the unit `u` (coprime to p) a square in Z_p?
fn unit_is_square(u: &BigInt, p: u64) -> bool {
    if p == 2 {
        return u.mod_floor(&BigInt::from(8)).is_one();
    }
    let pb = BigInt::from(p);
    let r = u.mod_floor(&pb);
    r.modpow(&BigInt::from((p - 1) / 2), &pb).is_one()
}

/// True iff a/b is a square in Q_p.
pub fn square_class_equal(a: &BigRational, b: &BigRational, p: u64) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidInput("square classes of zero are undefined".into()));
    }
    let (v, u) = split(&(a / b), p);
    Ok(v % 2 == 0 && unit_is_square(&u, p))
}

/// True iff x is the square of a rational number.
pub fn is_rational_square(x: &BigRational) -> bool {
    if x.is_negative() {
        return false;
    }
    let sq = |n: &BigInt| {
        let r = n.sqrt();
        &r * &r == *n
    };
    sq(x.numer()) && sq(x.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(a))
    }

    #[test]
    fn examples() {
        assert!(square_class_equal(&q(2), &q(3), 5).unwrap());
        assert!(!square_class_equal(&q(1), &q(7), 2).unwrap());
        for p in [2, 3, 5, 7, 11] {
            assert!(square_class_equal(&q(18), &q(2), p).unwrap());
        }
        assert!(square_class_equal(&q(1), &q(17), 2).unwrap());
        assert!(!square_class_equal(&q(3), &q(1), 3).unwrap());
        assert!(square_class_equal(&BigRational::new(1.into(), 2.into()), &q(2), 2).unwrap());
        assert!(square_class_equal(&q(2), &q(3), 4).is_err());
        assert!(square_class_equal(&q(0), &q(3), 3).is_err());
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors_u64(48), vec![2, 3]);
        assert_eq!(prime_factors_u64(1), Vec::<u64>::new());
        assert_eq!(prime_factors_u64(97), vec![97]);
        assert!(is_rational_square(&BigRational::new(9.into(), 4.into())));
        assert!(!is_rational_square(&q(-4)));
    }
}

//! Exact rationals and their decimal text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses "p/q" or "p" with optional sign; the denominator must be nonzero.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn parse_nonzero(s: &str) -> Result<Rational> {
    let r = parse(s)?;
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    Ok(r)
}

/// Prints "p" for integers and "p/q" otherwise.
pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root when `r` is the square of a rational.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().magnitude().sqrt();
    let d = r.denom().magnitude().sqrt();
    let cand = Rational::new(BigInt::from(n), BigInt::from(d));
    (&cand * &cand == *r).then_some(cand)
}

/// Decimal digits of the larger of numerator and denominator.
pub fn height_digits(r: &Rational) -> usize {
    let n = r.numer().magnitude().to_string().len();
    let d = r.denom().to_string().len();
    n.max(d)
}

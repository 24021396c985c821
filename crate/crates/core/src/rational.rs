//! Exact rational helpers shared by every module.

use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Q = num_rational::BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Converts an integral rational to `i64`, `None` when fractional or out of range.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal `{}`", self.0)
    }
}

impl core::error::Error for ParseRationalError {}

/// Parses `n`, `-n` or `p/q`.
pub fn parse_q(text: &str) -> Result<Q, ParseRationalError> {
    let t = text.trim();
    let err = || ParseRationalError(String::from(t));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = den.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Q::new(n, d))
}

/// Writes `n` or `p/q` (the format accepted by [`parse_q`]).
pub fn write_q(f: &mut impl fmt::Write, x: &Q) -> fmt::Result {
    if x.denom().is_one() {
        write!(f, "{}", x.numer())
    } else {
        write!(f, "{}/{}", x.numer(), x.denom())
    }
}

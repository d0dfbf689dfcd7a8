//! Exact rational helpers. Every cost in the crate is a [`Rational`].

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Canonical reduced `p/q` string; integers keep the `/1` suffix.
pub fn to_exact_string(r: &Rational) -> String {
    let mut s = r.numer().to_string();
    s.push('/');
    s.push_str(&r.denom().to_string());
    s
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `p/q` or a bare integer `p`.
pub fn parse_exact(s: &str) -> Result<Rational, ParseRationalError> {
    let bad = || ParseRationalError(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numer = BigInt::from_str(n).map_err(|_| bad())?;
    let denom = BigInt::from_str(d).map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Nearest `f64`, for display only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // the ratio of two huge integers; fall back to scaled division
        let (n, d) = (r.numer(), r.denom());
        let shift = n.bits().max(d.bits()).saturating_sub(900);
        let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Distance from `r` to the nearest integer.
pub fn fractionality(r: &Rational) -> Rational {
    let f = r - r.floor();
    let g = Rational::one() - &f;
    if f < g {
        f
    } else {
        g
    }
}

/// `ceil(r)` as an integer rational.
pub fn ceil(r: &Rational) -> Rational {
    r.ceil()
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

/// `p/q` formatting adaptor.
pub struct Exact<'a>(pub &'a Rational);

impl fmt::Display for Exact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.0;
        if r.denom().is_one() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::from(1), |acc, r| acc.lcm(r.denom()))
}

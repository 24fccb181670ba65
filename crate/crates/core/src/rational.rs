//! Exact rational plumbing: parsing and canonical rendering.
//!
//! All metric and transport arithmetic is exact; nothing in this crate
//! touches floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Renders a rational canonically: `"3"` when integral, `"3/2"` otherwise.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"3"`, `"-3"`, or `"3/2"` into an exact rational.
pub fn parse_rational_str(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::input(format!("invalid rational numerator {num:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::input(format!("invalid rational denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::input(format!("zero denominator in rational {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Parses a JSON value that is either an integer or a `"p/q"` string.
pub fn parse_rational_value(v: &serde_json::Value, path: &str) -> Result<BigRational> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                Err(Error::input(format!(
                    "{path}: expected an exact integer or \"p/q\" string, got {n}"
                )))
            }
        }
        serde_json::Value::String(s) => parse_rational_str(s)
            .map_err(|e| Error::input(format!("{path}: {e}"))),
        other => Err(Error::input(format!(
            "{path}: expected a rational (integer or \"p/q\" string), got {other}"
        ))),
    }
}

/// Rational as a JSON value in the same form `parse_rational_value` accepts.
pub fn rational_to_value(q: &BigRational) -> serde_json::Value {
    if q.denom().is_one() {
        if let Ok(i) = i64::try_from(q.numer()) {
            return serde_json::Value::Number(serde_json::Number::from(i));
        }
    }
    serde_json::Value::String(format_rational(q))
}

pub fn is_nonnegative(q: &BigRational) -> bool {
    !q.is_negative()
}

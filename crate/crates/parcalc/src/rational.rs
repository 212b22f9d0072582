//! The shared exact scalar type and its wire format.
//!
//! All numeric quantities in this crate are arbitrary-precision rationals,
//! kept in lowest terms with a positive denominator (the representation
//! `num_rational::BigRational` maintains on every operation). On the wire a
//! rational is a string `"p/q"`, with the `/q` part omitted when the value
//! is an integer, e.g. `"3"`, `"-1/2"`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar: arbitrary precision, always reduced, denominator
/// always positive.
pub type Rational = num_rational::BigRational;

/// Failure to interpret a string as a rational.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty string is not a rational")]
    Empty,
    #[error("invalid integer part in rational: {0:?}")]
    BadInteger(String),
    #[error("zero denominator in rational: {0:?}")]
    ZeroDenominator(String),
    #[error("malformed rational (expected \"p\" or \"p/q\"): {0:?}")]
    Malformed(String),
}

/// Convenience constructor used pervasively in tests: `rat(1, 2)` is 1/2.
///
/// Panics on a zero denominator; test-oriented, so no `Result`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for an integer rational.
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p"` or `"p/q"` into a reduced rational.
///
/// Whitespace around the string or on either side of the slash is accepted;
/// a zero denominator or anything else unparsable is an error rather than a
/// panic.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |part: &str| -> Result<BigInt, ParseRationalError> {
        part.trim()
            .parse::<BigInt>()
            .map_err(|_| ParseRationalError::BadInteger(part.trim().to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            if q.contains('/') {
                return Err(ParseRationalError::Malformed(s.to_string()));
            }
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Renders a rational in the wire format (`Display` already produces `p/q`
/// reduced, or bare `p` for integers).
pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}

/// Floor of a rational as a `BigInt`.
pub fn floor_big(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

/// Fractional part in `[0, 1)`: `q - floor(q)`.
pub fn frac_part(q: &Rational) -> Rational {
    q - q.floor()
}

/// True when `q` is a non-negative integer.
pub fn is_nonneg_integer(q: &Rational) -> bool {
    q.is_integer() && !q.is_negative()
}

/// Serde adapter serializing a [`Rational`] as its wire string.
///
/// Use as `#[serde(with = "crate::rational::qstr")]` on struct fields.
pub mod qstr {
    use super::{parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(de::Error::custom)
    }
}

/// `1` as a rational, occasionally clearer at call sites than `One::one()`.
pub fn one() -> Rational {
    Rational::one()
}

/// `0` as a rational.
pub fn zero() -> Rational {
    Rational::zero()
}

//! Exact rationals and their canonical string form.
//!
//! Every rational crossing a file boundary is written as `"p/q"` in lowest
//! terms with a positive denominator, integers included (`"2/1"`). Readers
//! also accept bare integers (`"3"`, `"-1"`).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn two() -> Rational {
    int(2)
}

/// Canonical `"p/q"` rendering.
pub fn to_canonical(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn parse(text: &str) -> Result<Rational, Error> {
    let text = text.trim();
    let bad = || Error::Format(format!("not a rational: {text:?}"));
    match text.split_once('/') {
        Some((numer, denom)) => {
            let numer: BigInt = numer.trim().parse().map_err(|_| bad())?;
            let denom: BigInt = denom.trim().parse().map_err(|_| bad())?;
            if denom.is_zero() {
                return Err(Error::Format(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::new(numer, denom))
        }
        None => {
            let numer: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(numer))
        }
    }
}

/// Decimal rendering for humans. Never parsed back.
pub fn to_display(value: &Rational) -> String {
    match value.to_f64() {
        Some(v) => format!("{v:.6}"),
        None => to_canonical(value),
    }
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Wrapper that prints the canonical form.
pub struct Canonical<'a>(pub &'a Rational);

impl fmt::Display for Canonical<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// Serde adapter: `#[serde(with = "crate::rational::string")]`.
pub mod string {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_canonical(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}

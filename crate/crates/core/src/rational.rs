//! Exact rational numbers and their textual forms.
//!
//! Every probability in the crate is a [`Rational`]. Decimal literals such as
//! `0.855` are read exactly (as `171/200`), and decimal rendering happens only
//! at the output layer.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use num_rational::BigRational as Rational;

/// Number literal that could not be read.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid number `{text}`: {reason}")]
pub struct NumberError {
    pub text: String,
    pub reason: &'static str,
}

/// Shorthand for `numer / denom`.
///
/// Panics when `denom` is zero.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// True when `0 <= r <= 1`.
pub fn is_probability(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

/// Parses a non-negative decimal (`0.855`, `1`, `.5`) or a fraction (`3/4`).
pub fn parse_rational(text: &str) -> Result<Rational, NumberError> {
    let err = |reason| NumberError {
        text: text.to_string(),
        reason,
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err("empty"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let numer = parse_digits(n).ok_or_else(|| err("numerator is not an integer"))?;
        let denom = parse_digits(d).ok_or_else(|| err("denominator is not an integer"))?;
        if denom.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(numer, denom));
    }
    let (whole, frac) = match s.split_once('.') {
        Some((w, f)) => (w, f),
        None => (s, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(err("no digits"));
    }
    let whole = if whole.is_empty() {
        BigInt::zero()
    } else {
        parse_digits(whole).ok_or_else(|| err("malformed decimal"))?
    };
    if frac.is_empty() {
        return Ok(Rational::from_integer(whole));
    }
    let frac_digits = parse_digits(frac).ok_or_else(|| err("malformed decimal"))?;
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    Ok(Rational::new(whole * &scale + frac_digits, scale))
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Exact form: `18/25`, or `1` for integers.
pub fn to_exact(r: &Rational) -> String {
    r.to_string()
}

/// Decimal rendering rounded (half away from zero) to `sig` significant
/// digits, trailing zeros dropped: `3078/4797` renders as `0.641651`.
pub fn to_decimal(r: &Rational, sig: usize) -> String {
    assert!(sig > 0);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let mut scaled = r.abs();
    let ten = int(10);
    let upper = Rational::from_integer(BigInt::from(10u32).pow(sig as u32));
    let lower = Rational::from_integer(BigInt::from(10u32).pow(sig as u32 - 1));
    // value = scaled * 10^(-exp)
    let mut exp: i64 = 0;
    while scaled >= upper {
        scaled /= &ten;
        exp -= 1;
    }
    while scaled < lower {
        scaled *= &ten;
        exp += 1;
    }
    let mut digits = (scaled + ratio(1, 2)).floor().to_integer();
    if Rational::from_integer(digits.clone()) >= upper {
        digits /= 10;
        exp -= 1;
    }
    let mut text = digits.to_string();
    if exp <= 0 {
        text.extend(std::iter::repeat_n('0', (-exp) as usize));
    } else {
        let exp = exp as usize;
        if text.len() <= exp {
            let pad = "0".repeat(exp - text.len());
            text = format!("0.{pad}{text}");
        } else {
            text.insert(text.len() - exp, '.');
        }
        let trimmed = text.trim_end_matches('0').trim_end_matches('.');
        text = trimmed.to_string();
    }
    if negative {
        text.insert(0, '-');
    }
    text
}

/// Shortest faithful literal: a plain decimal when the value has a finite
/// decimal expansion, otherwise `p/q`. Parsing the result gives back `r`.
pub fn to_literal(r: &Rational) -> String {
    let mut d = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut places = 0u32;
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() || r.is_negative() {
        return to_exact(r);
    }
    places = places.max(twos).max(fives);
    if places == 0 {
        return r.numer().to_string();
    }
    let scaled = (r * Rational::from_integer(BigInt::from(10u32).pow(places))).to_integer();
    let mut text = scaled.to_string();
    let places = places as usize;
    if text.len() <= places {
        text = format!("{}{}", "0".repeat(places + 1 - text.len()), text);
    }
    text.insert(text.len() - places, '.');
    text
}

/// Display adapter printing `exact ≈ decimal` when they differ.
pub struct Both<'a>(pub &'a Rational);

impl fmt::Display for Both<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exact = to_exact(self.0);
        let dec = to_decimal(self.0, 6);
        if exact == dec {
            write!(f, "{exact}")
        } else {
            write!(f, "{exact} ≈ {dec}")
        }
    }
}

/// Serde helpers storing a rational as its exact string.
pub mod serde_string {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_exact(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.as_str()),
        };
        let r = parse_rational(body).map_err(de::Error::custom)?;
        Ok(if neg { -r } else { r })
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&to_exact(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            let text: Option<String> = Option::deserialize(d)?;
            text.map(|t| parse_rational(&t).map_err(de::Error::custom))
                .transpose()
        }
    }
}

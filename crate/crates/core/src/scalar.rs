//! Scalar backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two backends are
//! provided: [`Rational`] (arbitrary precision, exact) for structural
//! identities and `f64` for eigenvalue work and quick evaluation.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Relative threshold under which a float is treated as zero.
pub const FLOAT_ZERO_TOL: f64 = 1e-10;

pub trait Scalar:
    Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// True for backends where `==` is exact arithmetic equality.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Self::from_int(numer) / Self::from_int(denom)
    }

    fn as_f64(&self) -> f64;

    /// Parses `"p/q"`, `"p"` or a decimal literal.
    fn parse_scalar(s: &str) -> Result<Self>;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    /// Zero test: exact for rationals, `|x| <= 1e-10 * max(1, |scale|)` for floats.
    fn is_negligible(&self, scale: &Self) -> bool;

    fn is_zeroish(&self) -> bool {
        self.is_negligible(&Self::one())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn parse_scalar(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p: f64 = p.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            let q: f64 = q.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
            if q == 0.0 {
                return Err(Error::Parse(format!("{s}: zero denominator")));
            }
            Ok(p / q)
        } else {
            s.parse().map_err(|_| Error::Parse(s.to_string()))
        }
    }

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(self.to_string()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(n.to_string())),
            Value::String(s) => Self::parse_scalar(s),
            other => Err(Error::Parse(other.to_string())),
        }
    }

    fn is_negligible(&self, scale: &Self) -> bool {
        self.abs() <= FLOAT_ZERO_TOL * scale.abs().max(1.0)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn as_f64(&self) -> f64 {
        if let Some(v) = ToPrimitive::to_f64(self) {
            if v.is_finite() {
                return v;
            }
        }
        // numerator and denominator may individually overflow f64
        let shift = self.numer().bits() as i64 - self.denom().bits() as i64;
        let scaled = if shift > 0 {
            self / Rational::from_integer(BigInt::one() << shift as usize)
        } else {
            self * Rational::from_integer(BigInt::one() << (-shift) as usize)
        };
        ToPrimitive::to_f64(&scaled).unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    }

    fn parse_scalar(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| Error::Parse(s.to_string()))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| Error::Parse(s.to_string()))?;
            if q.is_zero() {
                return Err(Error::Parse(format!("{s}: zero denominator")));
            }
            return Ok(Rational::new(p, q));
        }
        if let Ok(p) = BigInt::from_str(s) {
            return Ok(Rational::from_integer(p));
        }
        parse_decimal(s).ok_or_else(|| Error::Parse(s.to_string()))
    }

    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => Self::parse_scalar(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Self::from_int(i))
                } else {
                    let f = n.as_f64().ok_or_else(|| Error::Parse(n.to_string()))?;
                    <Rational as FromPrimitive>::from_f64(f)
                        .ok_or_else(|| Error::Parse(n.to_string()))
                }
            }
            other => Err(Error::Parse(other.to_string())),
        }
    }

    fn is_negligible(&self, _scale: &Self) -> bool {
        self.is_zero()
    }
}

/// Exact value of a decimal literal such as `-0.125` or `1.5e-3`.
fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let negative = int_part.starts_with('-');
    let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut value = Rational::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exp - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if negative { -value } else { value })
}

/// Converts a slice between scalar backends through `f64`, or exactly when
/// the target is rational and the source is rational.
pub fn to_f64_vec<S: Scalar>(xs: &[S]) -> Vec<f64> {
    xs.iter().map(Scalar::as_f64).collect()
}

/// `serde(with = ...)` adapters that route scalars through
/// [`Scalar::to_json`]/[`Scalar::from_json`], so rationals travel as `"p/q"`.
pub mod serde_scalar {
    use super::Scalar;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Scalar, Se: Serializer>(v: &S, ser: Se) -> Result<Se::Ok, Se::Error> {
        v.to_json().serialize(ser)
    }

    pub fn deserialize<'de, S: Scalar, D: Deserializer<'de>>(de: D) -> Result<S, D::Error> {
        let v = Value::deserialize(de)?;
        S::from_json(&v).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Scalar, Se: Serializer>(v: &[S], ser: Se) -> Result<Se::Ok, Se::Error> {
            Value::Array(v.iter().map(Scalar::to_json).collect()).serialize(ser)
        }

        pub fn deserialize<'de, S: Scalar, D: Deserializer<'de>>(
            de: D,
        ) -> Result<Vec<S>, D::Error> {
            let v = Vec::<Value>::deserialize(de)?;
            v.iter()
                .map(|x| S::from_json(x).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod vec2 {
        use super::*;

        pub fn serialize<S: Scalar, Se: Serializer>(
            v: &[Vec<S>],
            ser: Se,
        ) -> Result<Se::Ok, Se::Error> {
            Value::Array(
                v.iter()
                    .map(|row| Value::Array(row.iter().map(Scalar::to_json).collect()))
                    .collect(),
            )
            .serialize(ser)
        }

        pub fn deserialize<'de, S: Scalar, D: Deserializer<'de>>(
            de: D,
        ) -> Result<Vec<Vec<S>>, D::Error> {
            let v = Vec::<Vec<Value>>::deserialize(de)?;
            v.iter()
                .map(|row| {
                    row.iter()
                        .map(|x| S::from_json(x).map_err(D::Error::custom))
                        .collect()
                })
                .collect()
        }
    }
}

//! Numeric abstraction shared by every set representation.
//!
//! The exact engines (interval unions, finite point sets) run on
//! [`Rational`]; grids and float-mode inputs run on `f64` (or `f32`). All
//! generic code goes through [`Scalar`], which extends the `num-traits`
//! hierarchy with the handful of conversions the geometry needs.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in reduced form.
pub type Rational = BigRational;

/// A number type the set engines can run on.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    /// `true` when `+ - * /` never round.
    const EXACT: bool;

    /// Hashable identity used for deduplication. Exact types use the value
    /// itself; floats are quantised to the session tolerance.
    type Key: Clone + Debug + Eq + Hash + Ord + Send + Sync;

    fn key(&self) -> Self::Key;

    /// Absolute tolerance for equality comparisons (zero for exact types).
    fn tolerance() -> f64;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    /// Exact conversion (binary floats are dyadic rationals).
    fn to_rational(&self) -> Rational;

    fn lossy_f64(&self) -> f64;

    fn from_lossy_f64(x: f64) -> Self;

    fn floor_i64(&self) -> i64;

    fn ceil_i64(&self) -> i64;

    /// Square root, rounded through `f64` for exact types.
    fn sqrt_approx(&self) -> Self {
        Self::from_lossy_f64(self.lossy_f64().sqrt())
    }

    /// Square root when it is representable exactly (always for floats).
    fn sqrt_exact(&self) -> Option<Self>;

    fn encode(&self) -> Value;

    fn decode(v: &Value) -> Result<Self>;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half(&self) -> Self {
        self.clone() / Self::two()
    }

    /// `2^k` for any integer `k`.
    fn pow2(k: i32) -> Self {
        let base = if k >= 0 { Self::two() } else { Self::one() / Self::two() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = out * base.clone();
        }
        out
    }

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.clone() - other.clone()).abs().lossy_f64() <= Self::tolerance()
        }
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Parses `"p/q"`, `"p"` or a finite decimal like `"-0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let mag = int_part.abs() * &scale + frac_part;
        let num = if neg { -mag } else { mag };
        return Ok(Rational::new(num, scale));
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Canonical `"p/q"` (or `"p"` for integers) text form.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    type Key = Rational;

    fn key(&self) -> Rational {
        self.clone()
    }

    fn tolerance() -> f64 {
        0.0
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn lossy_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn from_lossy_f64(x: f64) -> Self {
        Rational::from_float(x).expect("finite float")
    }

    fn floor_i64(&self) -> i64 {
        self.floor().to_integer().to_i64().expect("floor fits in i64")
    }

    fn ceil_i64(&self) -> i64 {
        self.ceil().to_integer().to_i64().expect("ceil fits in i64")
    }

    fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| Rational::new(n, d))
    }

    fn encode(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn decode(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rational::from_integer(BigInt::from(i)))
                } else {
                    parse_rational(&n.to_string())
                }
            }
            other => Err(Error::Parse(format!("expected a number, got {other}"))),
        }
    }

    fn pow2(k: i32) -> Self {
        let p = BigInt::one() << k.unsigned_abs();
        if k >= 0 {
            Rational::from_integer(p)
        } else {
            Rational::new(BigInt::one(), p)
        }
    }
}

macro_rules! float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;
            type Key = i64;

            fn key(&self) -> i64 {
                (f64::from(*self) / $tol).round() as i64
            }

            fn tolerance() -> f64 {
                $tol
            }

            fn from_ratio(num: i64, den: i64) -> Self {
                (num as f64 / den as f64) as $t
            }

            fn from_rational(r: &Rational) -> Self {
                r.lossy_f64() as $t
            }

            fn to_rational(&self) -> Rational {
                Rational::from_float(*self).expect("finite float")
            }

            fn lossy_f64(&self) -> f64 {
                f64::from(*self)
            }

            fn from_lossy_f64(x: f64) -> Self {
                x as $t
            }

            fn floor_i64(&self) -> i64 {
                self.floor() as i64
            }

            fn ceil_i64(&self) -> i64 {
                self.ceil() as i64
            }

            fn sqrt_approx(&self) -> Self {
                self.sqrt()
            }

            fn sqrt_exact(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }

            fn encode(&self) -> Value {
                serde_json::Number::from_f64(f64::from(*self))
                    .map(Value::Number)
                    .unwrap_or(Value::Null)
            }

            fn decode(v: &Value) -> Result<Self> {
                match v {
                    Value::Number(n) => n
                        .as_f64()
                        .map(|x| x as $t)
                        .ok_or_else(|| Error::Parse(format!("bad number {n}"))),
                    Value::String(s) => Ok(parse_rational(s)?.lossy_f64() as $t),
                    other => Err(Error::Parse(format!("expected a number, got {other}"))),
                }
            }
        }
    };
}

float_scalar!(f64, 1e-9);
float_scalar!(f32, 1e-5);

/// Convenience constructor for exact literals in tests and examples.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), q(-3, 4));
        assert_eq!(parse_rational("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn text_round_trip() {
        for r in [q(0, 1), q(5, 1), q(-17, 12), q(1, 1 << 40)] {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }

    #[test]
    fn pow2_matches_repeated_halving() {
        assert_eq!(Rational::pow2(-3), q(1, 8));
        assert_eq!(Rational::pow2(5), q(32, 1));
        assert_eq!(f64::pow2(-2), 0.25);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(q(9, 4).sqrt_exact(), Some(q(3, 2)));
        assert_eq!(q(2, 1).sqrt_exact(), None);
        assert_eq!(q(-1, 1).sqrt_exact(), None);
    }

    #[test]
    fn float_keys_quantise() {
        assert_eq!((0.1f64 + 0.2).key(), 0.3f64.key());
        assert_ne!(0.3f64.key(), 0.31f64.key());
    }
}

//! Scalar abstraction for the exact linear-algebra and LP layer.
//!
//! Everything in [`crate::linalg`] and [`crate::lp`] is generic over [`Scalar`],
//! an exact ordered field. The bound deliberately requires `Ord`, which rules
//! out `f32`/`f64`: every predicate built on top of these routines is an exact
//! equality test.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// An exact ordered field.
pub trait Scalar:
    Clone + fmt::Debug + Ord + Signed + num_traits::Num + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;
}

impl<T> Scalar for Ratio<T>
where
    T: Clone + fmt::Debug + Integer + Signed + Send + Sync + From<i64> + 'static,
{
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(T::from(v))
    }
}

/// Rational number with arbitrary-precision numerator and denominator.
pub type Rational = BigRational;

/// Word-sized rational; useful for small programs where overflow is impossible.
pub type SmallRational = Ratio<i64>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Formats as `"num/den"`, or `"num"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Decimal rendering with a fixed number of fractional digits, rounding half to even.
pub fn to_fixed_decimal(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let mut n = floor.to_integer();
    if frac > half || (frac == half && n.is_odd()) {
        n += 1;
    }
    let negative = n.is_negative();
    let abs = n.abs();
    let (int_part, frac_part) = abs.div_rem(&scale);
    let sign = if negative { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = digits as usize
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-2/4").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(format_rational(&rat(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn fixed_decimal_rounds_half_even() {
        assert_eq!(to_fixed_decimal(&rat(4, 3), 6), "1.333333");
        assert_eq!(to_fixed_decimal(&rat(2, 3), 6), "0.666667");
        assert_eq!(to_fixed_decimal(&rat(1, 2_000_000), 6), "0.000000");
        assert_eq!(to_fixed_decimal(&rat(3, 2_000_000), 6), "0.000002");
        assert_eq!(to_fixed_decimal(&rat(-1, 3), 6), "-0.333333");
        assert_eq!(to_fixed_decimal(&int(-2), 2), "-2.00");
        assert_eq!(to_fixed_decimal(&rat(-1, 2_000_000), 6), "0.000000");
    }
}

//! Exact rational numbers for probabilities and rates.
//!
//! Thin newtype over [`num_rational::BigRational`] that always stays in lowest
//! terms, parses the `num/den` notation used by configuration files and renders
//! decimals with a fixed number of significant digits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

/// Significant digits used for every decimal rendering of an exact value.
pub const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("decimal literal `{0}` is not accepted; write it as num/den")]
    Decimal(String),
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Self(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// True when the value lies in the closed unit interval.
    pub fn is_probability(&self) -> bool {
        !self.is_negative() && self <= &Self::one()
    }

    pub fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b { a.clone() } else { b.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact decimal rendering rounded (half away from zero) to `digits`
    /// significant digits, trailing zeros removed.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let negative = self.is_negative();
        let value = self.0.abs();
        let ten = BigInt::from(10);

        // exponent e with 10^e <= value < 10^(e+1)
        let mut exp: i64 = value.numer().to_string().len() as i64 - value.denom().to_string().len() as i64;
        loop {
            let lo = pow10_rational(exp);
            let hi = pow10_rational(exp + 1);
            if value < lo {
                exp -= 1;
            } else if value >= hi {
                exp += 1;
            } else {
                break;
            }
        }

        // scaled = value * 10^(digits-1-exp), rounded to an integer
        let shift = digits as i64 - 1 - exp;
        let scaled = value * pow10_rational(shift);
        let (q, r) = scaled.numer().div_rem(scaled.denom());
        let mut mantissa = q;
        if r * 2 >= *scaled.denom() {
            mantissa += 1;
        }
        let mut shift = shift;
        if mantissa == num_traits::pow(ten.clone(), digits) {
            mantissa /= &ten;
            shift -= 1;
        }

        let mut text = mantissa.to_string();
        let rendered = if shift <= 0 {
            text.push_str(&"0".repeat((-shift) as usize));
            text
        } else {
            let shift = shift as usize;
            if text.len() <= shift {
                text = format!("{}{}", "0".repeat(shift - text.len() + 1), text);
            }
            let split = text.len() - shift;
            let (int_part, frac_part) = text.split_at(split);
            let frac_part = frac_part.trim_end_matches('0');
            if frac_part.is_empty() {
                int_part.to_string()
            } else {
                format!("{int_part}.{frac_part}")
            }
        };
        if negative { format!("-{rendered}") } else { rendered }
    }

    /// Parses an exact decimal literal such as `0.15` or `-0.5`. Used for
    /// command-line tuning knobs, never for channel probabilities.
    pub fn from_decimal_str(s: &str) -> Result<Self, ParseRationalError> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty()
            || !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(ParseRationalError::Malformed(s.to_string()));
        }
        let digits = format!("{int_part}{frac_part}");
        let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| ParseRationalError::Malformed(s.to_string()))? };
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        let r = Self::new(numer, denom);
        Ok(if negative { -r } else { r })
    }
}

fn pow10_rational(exp: i64) -> BigRational {
    let p = num_traits::pow(BigInt::from(10), exp.unsigned_abs() as usize);
    if exp >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `num/den` or a bare integer. Decimal points are rejected.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        if t.contains('.') || t.contains('e') || t.contains('E') {
            return Err(ParseRationalError::Decimal(t.to_string()));
        }
        let parse_int = |part: &str| -> Result<BigInt, ParseRationalError> {
            let part = part.trim();
            if part.is_empty() || !part.trim_start_matches(['-', '+']).chars().all(|c| c.is_ascii_digit()) {
                return Err(ParseRationalError::Malformed(t.to_string()));
            }
            part.parse::<BigInt>().map_err(|_| ParseRationalError::Malformed(t.to_string()))
        };
        match t.split_once('/') {
            Some((n, d)) => {
                let n = parse_int(n)?;
                let d = parse_int(d)?;
                if d.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator(t.to_string()));
                }
                Ok(Self::new(n, d))
            }
            None => Ok(Self::from_integer(parse_int(t)?)),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(r("21/16"), Rational::new(21, 16));
        assert_eq!(r("2/4"), Rational::new(1, 2));
        assert_eq!(r("1"), Rational::one());
        assert_eq!(r(" 0 "), Rational::zero());
        assert_eq!(r("-3/9"), Rational::new(-1, 3));
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        assert!(matches!("1.5".parse::<Rational>(), Err(ParseRationalError::Decimal(_))));
        assert!(matches!("0.5".parse::<Rational>(), Err(ParseRationalError::Decimal(_))));
        assert!(matches!("1/0".parse::<Rational>(), Err(ParseRationalError::ZeroDenominator(_))));
        assert!(matches!("a/2".parse::<Rational>(), Err(ParseRationalError::Malformed(_))));
        assert!(matches!("".parse::<Rational>(), Err(ParseRationalError::Empty)));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(Rational::new(21, 16).to_decimal(12), "1.3125");
        assert_eq!(Rational::new(1141, 512).to_decimal(12), "2.228515625");
        assert_eq!(Rational::new(1, 3).to_decimal(12), "0.333333333333");
        assert_eq!(Rational::new(2, 3).to_decimal(12), "0.666666666667");
        assert_eq!(Rational::new(-1, 8).to_decimal(12), "-0.125");
        assert_eq!(Rational::from_integer(1000).to_decimal(12), "1000");
        assert_eq!(Rational::new(1, 1000).to_decimal(3), "0.001");
        assert_eq!(Rational::new(9999, 1000).to_decimal(2), "10");
        assert_eq!(Rational::zero().to_decimal(12), "0");
    }

    #[test]
    fn decimal_rendering_agrees_with_float() {
        for (n, d) in [(177, 256), (117, 128), (397927, 262144), (35773, 19683), (5, 7)] {
            let q = Rational::new(n, d);
            let parsed: f64 = q.to_decimal(12).parse().unwrap();
            assert!((parsed - q.to_f64()).abs() <= 1e-11 * q.to_f64().abs());
        }
    }

    #[test]
    fn decimal_literals() {
        assert_eq!(Rational::from_decimal_str("0.1").unwrap(), Rational::new(1, 10));
        assert_eq!(Rational::from_decimal_str("-0.15").unwrap(), Rational::new(-3, 20));
        assert_eq!(Rational::from_decimal_str("2").unwrap(), Rational::from_integer(2));
        assert_eq!(Rational::from_decimal_str(".5").unwrap(), Rational::new(1, 2));
        assert!(Rational::from_decimal_str("x").is_err());
        assert!(Rational::from_decimal_str(".").is_err());
    }
}

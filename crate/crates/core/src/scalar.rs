//! Numeric backends.
//!
//! Every formula with integer exponents (EPPFs, block-count laws, allocation
//! rules) is written once against [`Scalar`] and evaluated either exactly in
//! [`Rational`] arithmetic or in `f64`. Gamma ratios with real exponents are
//! carried in [`LogScalar`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = BigRational;

/// Field operations shared by the exact and floating-point backends.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for backends whose arithmetic is exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_u64(v: u64) -> Self;
    /// Exact conversion for the rational backend (every finite double is a
    /// dyadic rational); `None` for non-finite input.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;

    /// Zero test used when classifying parameters. Exact for rationals;
    /// relative to `scale` for floats.
    fn is_negligible(&self, scale: f64) -> bool;

    /// Square root when it is representable in the backend (perfect squares
    /// for rationals). `None` for negative input.
    fn sqrt_exact(&self) -> Option<Self>;

    /// `p/q` for rationals, shortest round-trip decimal for floats.
    fn render(&self) -> String;

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_u64(v: u64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-12 * scale.abs().max(1.0)
    }
    fn sqrt_exact(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
    fn render(&self) -> String {
        format_f64(*self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_u64(v: u64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Option<Self> {
        Rational::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negligible(&self, _scale: f64) -> bool {
        Zero::is_zero(self)
    }
    fn sqrt_exact(&self) -> Option<Self> {
        if Signed::is_negative(self) {
            return None;
        }
        let num = self.numer().sqrt();
        let den = self.denom().sqrt();
        (&num * &num == *self.numer() && &den * &den == *self.denom())
            .then(|| Rational::new(num, den))
    }
    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

/// Shortest string that parses back to the same `f64`; scientific notation
/// outside `[1e-5, 1e16)`.
pub fn format_f64(v: f64) -> String {
    if !v.is_finite() || v == 0.0 {
        return if v == 0.0 { "0".to_string() } else { v.to_string() };
    }
    let a = v.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// A parsed numeric literal: fractions and integers stay exact, decimals are
/// floats unless exactness is forced.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(Rational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => Scalar::to_f64(r),
            Number::Float(x) => *x,
        }
    }

    /// Decimal literals such as `0.15` read as the rational `3/20`.
    pub fn parse_exact(s: &str) -> Result<Rational> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num = parse_decimal(num)?;
            let den = parse_decimal(den)?;
            if Zero::is_zero(&den) {
                return Err(Error::Domain(format!("zero denominator in {s:?}")));
            }
            return Ok(num / den);
        }
        parse_decimal(s)
    }
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Domain(format!("not a number: {s:?}"));
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(all);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

impl FromStr for Number {
    type Err = Error;

    /// `"1/2"` and `"3"` parse exactly, `"0.8"` parses as a float.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.contains('/') || t.chars().all(|c| c.is_ascii_digit() || c == '-' || c == '+') {
            Number::parse_exact(t).map(Number::Exact)
        } else {
            t.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Number::Float)
                .ok_or_else(|| Error::Domain(format!("not a number: {s:?}")))
        }
    }
}

/// Sign of a [`LogScalar`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn as_f64(self) -> f64 {
        match self {
            Sign::Negative => -1.0,
            Sign::Zero => 0.0,
            Sign::Positive => 1.0,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// A real number stored as sign and natural log of its magnitude.
///
/// `ln_abs` is meaningless when `sign` is [`Sign::Zero`].
#[derive(Debug, Clone, Copy)]
pub struct LogScalar {
    ln_abs: f64,
    sign: Sign,
}

impl LogScalar {
    pub const ZERO: LogScalar = LogScalar {
        ln_abs: f64::NEG_INFINITY,
        sign: Sign::Zero,
    };
    pub const ONE: LogScalar = LogScalar {
        ln_abs: 0.0,
        sign: Sign::Positive,
    };

    /// Positive value `exp(ln)`.
    pub fn from_ln(ln: f64) -> Self {
        if ln == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogScalar {
                ln_abs: ln,
                sign: Sign::Positive,
            }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            LogScalar {
                ln_abs: v.abs().ln(),
                sign: if v > 0.0 { Sign::Positive } else { Sign::Negative },
            }
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == Sign::Zero
    }

    /// Natural log of the magnitude (`-inf` for zero).
    pub fn ln_abs(&self) -> f64 {
        match self.sign {
            Sign::Zero => f64::NEG_INFINITY,
            _ => self.ln_abs,
        }
    }

    pub fn value(&self) -> f64 {
        match self.sign {
            Sign::Zero => 0.0,
            s => s.as_f64() * self.ln_abs.exp(),
        }
    }

    pub fn powf(self, p: f64) -> Self {
        match self.sign {
            Sign::Zero => Self::ZERO,
            Sign::Positive => LogScalar::from_ln(self.ln_abs * p),
            Sign::Negative => LogScalar {
                ln_abs: f64::NAN,
                sign: Sign::Positive,
            },
        }
    }

    pub fn recip(self) -> Self {
        LogScalar {
            ln_abs: -self.ln_abs,
            sign: self.sign,
        }
    }
}

impl PartialEq for LogScalar {
    fn eq(&self, other: &Self) -> bool {
        self.sign == other.sign && (self.sign == Sign::Zero || self.ln_abs == other.ln_abs)
    }
}

impl PartialOrd for LogScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value().partial_cmp(&other.value()).or_else(|| {
            // both huge: compare by sign then magnitude
            match (self.sign, other.sign) {
                (Sign::Positive, Sign::Positive) => self.ln_abs.partial_cmp(&other.ln_abs),
                (Sign::Negative, Sign::Negative) => other.ln_abs.partial_cmp(&self.ln_abs),
                _ => self.sign.as_f64().partial_cmp(&other.sign.as_f64()),
            }
        })
    }
}

impl Mul for LogScalar {
    type Output = LogScalar;
    fn mul(self, rhs: LogScalar) -> LogScalar {
        match self.sign * rhs.sign {
            Sign::Zero => LogScalar::ZERO,
            sign => LogScalar {
                ln_abs: self.ln_abs + rhs.ln_abs,
                sign,
            },
        }
    }
}

impl Div for LogScalar {
    type Output = LogScalar;
    fn div(self, rhs: LogScalar) -> LogScalar {
        // division by zero yields a signed infinity, as for floats
        if rhs.sign == Sign::Zero {
            return LogScalar {
                ln_abs: f64::INFINITY,
                sign: if self.sign == Sign::Zero { Sign::Positive } else { self.sign },
            };
        }
        self * rhs.recip()
    }
}

impl Add for LogScalar {
    type Output = LogScalar;
    fn add(self, rhs: LogScalar) -> LogScalar {
        if self.sign == Sign::Zero {
            return rhs;
        }
        if rhs.sign == Sign::Zero {
            return self;
        }
        let (big, small) = if self.ln_abs >= rhs.ln_abs {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let d = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            LogScalar {
                ln_abs: big.ln_abs + d.ln_1p(),
                sign: big.sign,
            }
        } else if d == 1.0 {
            LogScalar::ZERO
        } else {
            LogScalar {
                ln_abs: big.ln_abs + (-d).ln_1p(),
                sign: big.sign,
            }
        }
    }
}

impl Neg for LogScalar {
    type Output = LogScalar;
    fn neg(self) -> LogScalar {
        LogScalar {
            ln_abs: self.ln_abs,
            sign: Sign::Negative * self.sign,
        }
    }
}

impl Sub for LogScalar {
    type Output = LogScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: LogScalar) -> LogScalar {
        self + (-rhs)
    }
}

impl fmt::Display for LogScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_f64(self.value()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parses_fractions_exactly_and_decimals_as_floats() {
        assert_eq!("1/2".parse::<Number>().unwrap(), Number::Exact(q(1, 2)));
        assert_eq!("3".parse::<Number>().unwrap(), Number::Exact(q(3, 1)));
        assert_eq!("0.8".parse::<Number>().unwrap(), Number::Float(0.8));
        assert_eq!(Number::parse_exact("0.15").unwrap(), q(3, 20));
        assert_eq!(Number::parse_exact("-1.5e-1").unwrap(), q(-3, 20));
        assert_eq!(Number::parse_exact("0.3/2").unwrap(), q(3, 20));
        assert!("1/0".parse::<Number>().is_err());
        assert!("abc".parse::<Number>().is_err());
    }

    #[test]
    fn rational_sqrt_only_for_perfect_squares() {
        assert_eq!(q(4, 100).sqrt_exact(), Some(q(1, 5)));
        assert_eq!(q(2, 1).sqrt_exact(), None);
        assert_eq!(q(-1, 4).sqrt_exact(), None);
    }

    #[test]
    fn render_forms() {
        assert_eq!(q(2, 3).render(), "2/3");
        assert_eq!(q(-4, 2).render(), "-2");
        assert_eq!(0.5f64.render(), "0.5");
        assert_eq!((1.0f64 / 3.0).render(), "0.3333333333333333");
        assert_eq!(1e-20f64.render(), "1e-20");
    }

    #[test]
    fn log_scalar_arithmetic() {
        let a = LogScalar::from_f64(3.0);
        let b = LogScalar::from_f64(-5.0);
        assert!(((a + b).value() + 2.0).abs() < 1e-14);
        assert!(((a * b).value() + 15.0).abs() < 1e-13);
        assert!(((a / b).value() + 0.6).abs() < 1e-15);
        assert!((a - a).is_zero());
        assert_eq!((a * LogScalar::ZERO).sign(), Sign::Zero);
        let tiny = LogScalar::from_ln(-800.0);
        assert!(((tiny + tiny).ln_abs() - (-800.0 + 2f64.ln())).abs() < 1e-12);
    }
}

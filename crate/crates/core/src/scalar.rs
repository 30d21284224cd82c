//! Exact rationals and the scalar abstraction shared by the exact and the
//! floating-point evaluation paths.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type ExactRational = BigRational;

pub fn q(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &ExactRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(x) {
        if v.is_finite() {
            return v;
        }
    }
    // Huge numerators/denominators: scale down by the bit-length difference.
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift > 0 {
        BigRational::new(x.numer().clone(), x.denom().clone() << shift as usize)
    } else {
        BigRational::new(x.numer().clone() << (-shift) as usize, x.denom().clone())
    };
    ToPrimitive::to_f64(&scaled).unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

/// Exact conversion of a finite double.
pub fn from_f64(x: f64) -> ExactRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn sign(x: &ExactRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn pow(x: &ExactRational, e: usize) -> ExactRational {
    num_traits::pow(x.clone(), e)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn binomial_q(n: usize, k: usize) -> ExactRational {
    BigRational::from_integer(BigInt::from(binomial(n, k)))
}

/// Parses "19", "-64", "1/3", "2.5", "-1e-3" into an exact rational.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
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
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Canonical string form: "p" for integers, "p/q" otherwise.
pub fn format_rational(x: &ExactRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Rounds `x` to `digits` decimals, ties to even, and renders it.
pub fn format_decimal(x: &ExactRational, digits: usize) -> String {
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), digits));
    let scaled = x * &scale;
    let rounded = round_half_even(&scaled);
    let neg = rounded.is_negative();
    let mag = rounded.abs().to_string();
    let mag = if mag.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (int_part, frac_part) = mag.split_at(mag.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

pub fn round_half_even(x: &ExactRational) -> BigInt {
    let floor = x.floor().to_integer();
    let rem = x - BigRational::from_integer(floor.clone());
    let half = frac(1, 2);
    if rem > half || (rem == half && floor.is_odd()) {
        floor + 1
    } else {
        floor
    }
}

/// Ring operations shared by the exact and the binary floating point paths.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Signed
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    fn from_q(x: &ExactRational) -> Self;
    fn from_usize(n: usize) -> Self;
    fn to_f64(&self) -> f64;
    /// Whether the arithmetic of this type is exact.
    const EXACT: bool;
}

impl Scalar for ExactRational {
    fn from_q(x: &ExactRational) -> Self {
        x.clone()
    }
    fn from_usize(n: usize) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
    const EXACT: bool = true;
}

impl Scalar for f64 {
    fn from_q(x: &ExactRational) -> Self {
        to_f64(x)
    }
    fn from_usize(n: usize) -> Self {
        n as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    const EXACT: bool = false;
}

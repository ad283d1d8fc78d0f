//! Coefficient fields for polynomial and matrix arithmetic.
//!
//! Two modes are supported: exact rationals ([`Rational`]) for every symbolic
//! identity, and `f64` for weights whose exponents are not representable as
//! short rationals.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Absolute threshold below which an `f64` value counts as zero in
/// divisibility and affinity tests.
pub const FLOAT_ZERO_TOL: f64 = 1e-10;

/// A field usable as a polynomial coefficient.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` when arithmetic in this field is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_rational(v: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// Exact zero for rationals, `|v| <= FLOAT_ZERO_TOL` for floats.
    fn is_negligible(&self) -> bool;

    /// The value as an integer, only when it is known exactly to be one.
    fn to_exact_integer(&self) -> Option<i64>;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(v: &Rational) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_exact_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(v: &Rational) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() <= FLOAT_ZERO_TOL
    }

    fn to_exact_integer(&self) -> Option<i64> {
        None
    }
}

/// `sign(num) * sqrt(num^2 / den)` evaluated with a single rounding, for
/// `den > 0`. Used to normalize exact Gram entries by `sqrt(d_i d_j)`.
pub fn signed_sqrt_ratio<T: Scalar>(num: &T, den: &T) -> f64 {
    let mag = (num.clone() * num.clone() / den.clone()).to_f64().sqrt();
    if *num < T::zero() {
        -mag
    } else {
        mag
    }
}

/// Parse a decimal (`-1.25`, `3e-2`) or fraction (`7/3`) literal exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (neg, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exp) = match body.find(['e', 'E']) {
        Some(p) => (&body[..p], body[p + 1..].parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / 10;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(digits);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -value } else { value })
}

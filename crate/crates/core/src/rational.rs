//! Exact rational helpers on top of [`BigRational`].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn from_big(numer: BigInt, denom: &BigUint) -> Rational {
    Rational::new(numer, BigInt::from(denom.clone()))
}

pub fn recip(denom: &BigUint) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(denom.clone()))
}

/// `(-1)^n` as a rational.
pub fn alt_sign(n: usize) -> Rational {
    if n % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Renders `p/q` (the denominator is always printed).
pub fn format(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

/// Decimal rendering truncated toward zero after `digits` fractional digits.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (value.abs() * Rational::from_integer(scale.clone())).floor();
    let (whole, frac) = scaled.to_integer().div_rem(&scale);
    let sign = if value.is_negative() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac, width = digits)
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

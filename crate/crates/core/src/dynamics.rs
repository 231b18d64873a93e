//! Shift operators, their closed forms, periodic points and rationality tests.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::basis::{Basis, BasisKind, Elements, Rule};
use crate::codec::orbit;
use crate::digits::{DigitString, Kind, Tail};
use crate::error::{Error, Result};
use crate::rational::{alt_sign, from_big, Rational};
use crate::series::{evaluate_unchecked, prefix_value, Mode, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftResult {
    pub digits: DigitString,
    /// The advanced basis, or the basis with one position deleted.
    pub basis: Basis,
    pub value: Value,
}

fn require_negad(digits: &DigitString, basis: &Basis) -> Result<()> {
    if digits.kind() != Kind::NegaD {
        return Err(Error::UnsupportedKind(digits.kind()));
    }
    digits.revalidate(basis)
}

/// `Delta_{e_1 ... e_k (0)}`.
fn head(digits: &DigitString, k: usize, basis: &Basis) -> Rational {
    prefix_value(&digits.with_kind(Kind::NegaD), k, basis)
}

/// `(-1)^k P_k x + (-1)^(k+1) P_k Delta_{e_1..e_k(0)}`.
fn closed_form(x: &Rational, g: &Rational, k: usize, basis: &Basis) -> Rational {
    let p = Rational::from_integer(BigInt::from(basis.prefix_product(k)));
    alt_sign(k) * &p * x - alt_sign(k) * p * g
}

/// `phi^k`: drops `k` digits and moves to the basis `d_{k+1}, d_{k+2}, ...`.
/// Exact values are checked against the closed form.
pub fn shift(digits: &DigitString, basis: &Basis, k: usize) -> Result<ShiftResult> {
    require_negad(digits, basis)?;
    let dropped = digits.dropped(k);
    let advanced = basis.advance(k);
    let value = evaluate_unchecked(&dropped, &advanced, Mode::Exact)?;
    if let Value::Exact(y) = &value {
        if let Ok(Value::Exact(x)) = evaluate_unchecked(digits, basis, Mode::Exact) {
            let g = head(digits, k, basis);
            assert_eq!(&closed_form(&x, &g, k, basis), y, "closed form of the shift");
        }
    }
    Ok(ShiftResult {
        digits: dropped,
        basis: advanced,
        value,
    })
}

/// `phi_m`: deletes digit `m` and basis element `m`.
pub fn shift_delete(digits: &DigitString, basis: &Basis, m: usize) -> Result<ShiftResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("positions start at 1".into()));
    }
    require_negad(digits, basis)?;
    let removed = digits.removed(m);
    let deleted = basis.delete(m);
    let value = evaluate_unchecked(&removed, &deleted, Mode::Exact)?;
    Ok(ShiftResult {
        digits: removed,
        basis: deleted,
        value,
    })
}

/// Shifts digits left over the same basis; fails at the first `n` with
/// `e_{n+1} > d_n - 1`.
pub fn digit_shift(digits: &DigitString, basis: &Basis) -> Result<DigitString> {
    digits.revalidate(basis)?;
    let shifted = digits.dropped(1);
    shifted.revalidate(basis).map_err(|e| match e {
        Error::DigitOutOfRange {
            position,
            digit,
            element,
        } => Error::NotWellDefined {
            position,
            digit,
            element,
        },
        other => other,
    })?;
    Ok(shifted)
}

/// The digit shift is defined everywhere iff `d_{n+1} <= d_n` for all `n`.
pub fn digit_shift_globally_defined(basis: &Basis) -> bool {
    basis.is_nonincreasing()
}

/// `phi^k(x)` from the canonical digits of `x`.
pub fn shift_value(x: &Rational, basis: &Basis, k: usize) -> Result<Rational> {
    let (_, states) = orbit(x, basis, k)?;
    Ok(states[k].clone())
}

/// Recovers `x` from `y = phi^k(x)` and the first `k` digits of `x`.
pub fn unshift(y: &Rational, prefix: &[u64], basis: &Basis) -> Result<Rational> {
    let k = prefix.len();
    let digits = DigitString::new(Kind::NegaD, prefix.to_vec(), Tail::Zeros, basis)?;
    let g = head(&digits, k, basis);
    let p = Rational::from_integer(BigInt::from(basis.prefix_product(k)));
    Ok(alt_sign(k) * y / p + g)
}

/// Fixed points `-i / (d + 1)`, `i = 0 .. d - 1`, of the shift over a constant basis.
pub fn fixed_points(basis: &Basis) -> Result<Vec<Rational>> {
    match basis.kind() {
        BasisKind::Constant(d) => {
            let d = *d as i64;
            Ok((0..d).map(|i| Rational::new(BigInt::from(-i), BigInt::from(d + 1))).collect())
        }
        _ => Err(Error::UnsupportedBasis("a constant basis")),
    }
}

/// The point with `phi^m(x) = x` whose digits repeat `e_1 .. e_m`.
pub fn periodic_point(basis: &Basis, prefix: &[u64]) -> Result<Rational> {
    let m = prefix.len();
    if m == 0 || !basis.is_purely_periodic_dividing(m) {
        return Err(Error::UnsupportedBasis("a purely periodic basis whose period divides m"));
    }
    let digits = DigitString::new(Kind::NegaD, prefix.to_vec(), Tail::Zeros, basis)?;
    let g = head(&digits, m, basis);
    let p = BigInt::from(basis.prefix_product(m));
    let denom = if m % 2 == 0 { p - 1 } else { -p - 1 };
    Ok((Rational::one() + Rational::new(BigInt::one(), denom)) * g)
}

/// The point with `phi^m(x) = phi^(m+c)(x)` whose digits are `e_1 .. e_m`
/// followed by `e_{m+1} .. e_{m+c}` repeated.
pub fn preperiodic_point(basis: &Basis, prefix: &[u64], m: usize, c: usize) -> Result<Rational> {
    if prefix.len() != m + c || c == 0 {
        return Err(Error::InvalidArgument(format!(
            "prefix needs m + c = {} digits, got {}",
            m + c,
            prefix.len()
        )));
    }
    let aligned = match basis.periodicity() {
        Some(p) => p.start <= m && c % p.len() == 0,
        None => false,
    };
    if !aligned {
        return Err(Error::UnsupportedBasis(
            "an eventually periodic basis whose period divides c after position m",
        ));
    }
    let digits = DigitString::new(Kind::NegaD, prefix.to_vec(), Tail::Zeros, basis)?;
    let short = head(&digits, m, basis);
    let long = head(&digits, m + c, basis);
    let d = Rational::from_integer(BigInt::from(basis.product(m + 1, m + c)));
    let signed = alt_sign(c + 1) * d;
    let denom = Rational::one() + &signed;
    if denom.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    Ok((short + signed * long) / denom)
}

/// Least `n0` with `q | d_1 ... d_n0` for `x = p/q`, or `None` when no such
/// `n0` exists.
pub fn finite_expansion(x: &Rational, basis: &Basis) -> Option<usize> {
    let mut r = x.denom().clone();
    if r.is_one() {
        return Some(0);
    }
    let reduce = |r: &mut BigInt, n: usize| -> bool {
        let g = r.gcd(&BigInt::from(basis.element(n)));
        if g.is_one() {
            false
        } else {
            *r /= g;
            true
        }
    };
    match basis.kind() {
        BasisKind::Rule { rule, head, .. } => {
            let mut n = 0;
            loop {
                n += 1;
                reduce(&mut r, n);
                if r.is_one() {
                    return Some(n);
                }
                if *rule == Rule::Primes && n > head.len() && BigInt::from(basis.element(n)) > r {
                    return None;
                }
            }
        }
        _ => {
            let p = basis.periodicity().expect("periodic basis");
            let mut n = 0;
            let mut quiet = 0;
            loop {
                n += 1;
                let changed = reduce(&mut r, n);
                if r.is_one() {
                    return Some(n);
                }
                if n > p.start {
                    quiet = if changed { 0 } else { quiet + 1 };
                    if quiet >= p.len() {
                        return None;
                    }
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeInput {
    Value(Rational),
    Digits(DigitString),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Probe {
    /// `phi^k(x) = phi^t(x)` with `k < t`.
    RationalWitness { k: usize, t: usize },
    NoRepeatWithinBudget,
}

/// Number of orbit terms that always contains a repeat for `x = p/q` over an
/// eventually periodic basis: every term has denominator dividing `q` and
/// lies in a unit interval.
pub fn state_bound(x: &Rational, basis: &Basis) -> Option<usize> {
    let p = basis.periodicity()?;
    let q: usize = x.denom().try_into().ok()?;
    (q + 1)
        .checked_mul(p.start + p.len())
        .and_then(|v| v.checked_add(2))
}

/// Searches the shift orbit for two equal terms within `budget` steps.
pub fn rationality_probe(input: &ProbeInput, basis: &Basis, budget: usize) -> Result<Probe> {
    let states: Vec<Rational> = match input {
        ProbeInput::Value(x) => orbit(x, basis, budget)?.1,
        ProbeInput::Digits(d) => {
            require_negad(d, basis)?;
            if d.is_truncated() {
                return Ok(Probe::NoRepeatWithinBudget);
            }
            let mut out = Vec::with_capacity(budget + 1);
            for k in 0..=budget {
                match evaluate_unchecked(&d.dropped(k), &basis.advance(k), Mode::Exact)? {
                    Value::Exact(v) => out.push(v),
                    Value::Enclosure(_) => return Ok(Probe::NoRepeatWithinBudget),
                }
            }
            out
        }
    };
    let mut first: HashMap<&Rational, usize> = HashMap::new();
    for (t, v) in states.iter().enumerate() {
        if let Some(&k) = first.get(v) {
            return Ok(Probe::RationalWitness { k, t });
        }
        first.insert(v, t);
    }
    Ok(Probe::NoRepeatWithinBudget)
}

/// `x` as `p/q` from a numerator and a positive denominator.
pub fn fraction(p: i64, q: i64) -> Result<Rational> {
    if q <= 0 {
        return Err(Error::InvalidArgument("denominator must be positive".into()));
    }
    Ok(from_big(BigInt::from(p), &num_bigint::BigUint::from(q as u64)))
}

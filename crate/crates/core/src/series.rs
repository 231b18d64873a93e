//! Series evaluation, tail sums `a_n`, residual bounds and the domain.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
#[cfg(test)]
use num_traits::Signed;

use crate::basis::{Basis, Elements};
use crate::digits::{DigitString, Kind, Tail};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{alt_sign, from_big, lcm, recip, Rational};

/// Depth used for rule-basis enclosures when none is given.
pub const DEFAULT_DEPTH: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    /// Enclosure from `depth` explicit terms plus a rigorous remainder.
    Interval(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Exact(Rational),
    Enclosure(Interval),
}

impl Value {
    pub fn exact(self) -> Option<Rational> {
        match self {
            Value::Exact(x) => Some(x),
            Value::Enclosure(_) => None,
        }
    }

    pub fn as_interval(&self) -> Interval {
        match self {
            Value::Exact(x) => Interval::point(x.clone()),
            Value::Enclosure(i) => i.clone(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.as_interval().contains(x)
    }
}

/// Integer coefficient of `1 / (d_1 ... d_n)` for digit `e` at position `n`.
fn coefficient(kind: Kind, n: usize, e: u64) -> BigInt {
    match kind {
        Kind::NegaD if n % 2 == 0 => BigInt::from(e),
        Kind::NegaD => -BigInt::from(e),
        Kind::NegaDn if n % 2 == 1 => BigInt::from(e + 1),
        Kind::NegaDn => -BigInt::from(e + 1),
        Kind::PositiveD => BigInt::from(e),
    }
}

/// Numerator over `d_from ... d_to` of `sum_{n=from..=to} c_n / (d_from ... d_n)`.
fn horner(
    kind: Kind,
    from: usize,
    to: usize,
    digit: impl Fn(usize) -> u64,
    basis: &impl Elements,
) -> BigInt {
    let mut num = BigInt::zero();
    let mut acc_product = BigUint::one();
    // num accumulates sum c_n * d_{n+1} ... d_to; scan backwards
    for n in (from..=to).rev() {
        num += coefficient(kind, n, digit(n)) * BigInt::from(acc_product.clone());
        acc_product *= basis.element(n);
    }
    num
}

/// `sum_{i<=n} c_i / (d_1 ... d_i)` over the first `n` digits.
pub fn prefix_value(digits: &DigitString, n: usize, basis: &Basis) -> Rational {
    let num = horner(
        digits.kind(),
        1,
        n,
        |i| digits.digit(i).unwrap_or(0),
        basis,
    );
    from_big(num, &basis.prefix_product(n))
}

/// Value of a digit string.
///
/// Truncated strings always give an enclosure. Rule bases give an enclosure
/// unless the series is a finite sum.
pub fn evaluate(digits: &DigitString, basis: &Basis, mode: Mode) -> Result<Value> {
    digits.revalidate(basis)?;
    evaluate_unchecked(digits, basis, mode)
}

/// Exact value or [`Error::ExactUnavailable`].
pub fn evaluate_exact(digits: &DigitString, basis: &Basis) -> Result<Rational> {
    evaluate(digits, basis, Mode::Exact)?
        .exact()
        .ok_or(Error::ExactUnavailable)
}

pub(crate) fn evaluate_unchecked(digits: &DigitString, basis: &Basis, mode: Mode) -> Result<Value> {
    let finite = digits.kind() != Kind::NegaDn && digits.nonzero_count().is_some();
    match mode {
        Mode::Exact if digits.is_truncated() => Ok(Value::Enclosure(enclosure(
            digits,
            basis,
            digits.prefix().len(),
            DEFAULT_DEPTH,
        )?)),
        Mode::Exact if finite => Ok(Value::Exact(finite_value(digits, basis))),
        Mode::Exact => exact_value(digits, basis).map(Value::Exact),
        Mode::Interval(depth) => {
            let n = if digits.is_truncated() {
                digits.prefix().len()
            } else {
                depth
            };
            Ok(Value::Enclosure(enclosure(digits, basis, n, depth)?))
        }
    }
}

fn finite_value(digits: &DigitString, basis: &Basis) -> Rational {
    let n = digits.normalized().prefix().len();
    prefix_value(digits, n, basis)
}

fn exact_value(digits: &DigitString, basis: &Basis) -> Result<Rational> {
    let p = basis.periodicity().ok_or(Error::ExactUnavailable)?;
    let (ds, period) = digits.periodicity().ok_or(Error::ExactUnavailable)?;
    let start = ds.max(p.start);
    let len = lcm(lcm(period.len(), p.len()), 2);
    let kind = digits.kind();
    let digit = |n: usize| digits.digit(n).unwrap_or(0);
    let head = horner(kind, 1, start, digit, basis);
    let block = horner(kind, start + 1, start + len, digit, basis);
    let q = BigInt::from(basis.product(start + 1, start + len)) - BigInt::one();
    let denom = basis.prefix_product(start) * q.magnitude();
    Ok(from_big(head * &q + block, &denom))
}

/// `a_n = sum_{k>=1} (-1)^(k+1) / (d_{n+1} ... d_{n+k})`.
pub fn tail_sum(basis: &Basis, n: usize, mode: Mode) -> Result<Value> {
    match mode {
        Mode::Exact => tail_sum_exact(basis, n).map(Value::Exact),
        Mode::Interval(depth) => Ok(Value::Enclosure(tail_sum_enclosure(basis, n, depth))),
    }
}

pub fn tail_sum_exact(basis: &Basis, n: usize) -> Result<Rational> {
    if !basis.is_exact() {
        return Err(Error::ExactUnavailable);
    }
    let shifted = basis.advance(n);
    let ones = DigitString::raw(Kind::NegaD, Vec::new(), Tail::Periodic(vec![1]));
    Ok(-exact_value(&ones, &shifted)?)
}

/// Enclosure of `a_n` between the partial sums of `depth` and `depth + 1`
/// terms; the terms alternate and shrink, so `a_n` lies between them.
pub fn tail_sum_enclosure(basis: &Basis, n: usize, depth: usize) -> Interval {
    let depth = depth.max(1);
    let mut num = BigInt::zero();
    let mut denom = BigUint::one();
    for k in 1..=depth {
        let d = basis.element(n + k);
        denom *= d;
        num = num * d + if k % 2 == 1 { 1 } else { -1 };
    }
    let s = from_big(num, &denom);
    let next_term = recip(&(denom * basis.element(n + depth + 1)));
    let t = if depth % 2 == 0 { s.clone() + next_term } else { s.clone() - next_term };
    if s <= t {
        Interval::new(s, t)
    } else {
        Interval::new(t, s)
    }
}

/// `a_n` exactly where possible, otherwise an enclosure of `DEFAULT_DEPTH` terms.
pub fn tail_sum_auto(basis: &Basis, n: usize) -> Interval {
    match tail_sum_exact(basis, n) {
        Ok(a) => Interval::point(a),
        Err(_) => tail_sum_enclosure(basis, n, DEFAULT_DEPTH),
    }
}

/// `[a_0 - 1, a_0]`; an outer enclosure for rule bases.
pub fn domain(basis: &Basis) -> Interval {
    let a = tail_sum_auto(basis, 0);
    Interval::new(a.lo() - Rational::one(), a.hi().clone())
}

/// Bounds of the NegaD residual after `n` terms given an enclosure of `a_n`.
fn residual_from(a: &Interval, n: usize, basis: &Basis) -> Interval {
    let p = recip(&basis.prefix_product(n));
    let one = Rational::one();
    if n % 2 == 0 {
        Interval::new((a.lo() - &one) * &p, a.hi() * &p)
    } else {
        Interval::new(-(a.hi() * &p), (&one - a.lo()) * &p)
    }
}

/// Exact range of the NegaD residual `r_n` over all digit tails.
pub fn residual_bounds(basis: &Basis, n: usize) -> Result<Interval> {
    let a = tail_sum_exact(basis, n)?;
    Ok(residual_from(&Interval::point(a), n, basis))
}

/// Residual range with an exact or enclosed `a_n`.
pub fn residual_enclosure(basis: &Basis, n: usize, depth: usize) -> Interval {
    let a = match tail_sum_exact(basis, n) {
        Ok(a) => Interval::point(a),
        Err(_) => tail_sum_enclosure(basis, n, depth),
    };
    residual_from(&a, n, basis)
}

/// Enclosure from `n` explicit digits plus the range of every possible tail.
fn enclosure(digits: &DigitString, basis: &Basis, n: usize, depth: usize) -> Result<Interval> {
    let head = prefix_value(digits, n, basis);
    let a = match tail_sum_exact(basis, n) {
        Ok(a) => Interval::point(a),
        Err(_) => tail_sum_enclosure(basis, n, depth.max(8)),
    };
    let rest = match digits.kind() {
        Kind::NegaD => residual_from(&a, n, basis),
        Kind::NegaDn => {
            let scale = alt_sign(n) * recip(&basis.prefix_product(n));
            &a.scale(&scale) - &residual_from(&a, n, basis)
        }
        Kind::PositiveD => Interval::new(Rational::zero(), recip(&basis.prefix_product(n))),
    };
    Ok(rest.shift(&head))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Rule;
    use crate::rational::{int, ratio};

    fn c(d: u64) -> Basis {
        Basis::constant(d).unwrap()
    }

    fn ds(prefix: Vec<u64>, tail: Tail, b: &Basis) -> DigitString {
        DigitString::negad(prefix, tail, b).unwrap()
    }

    /// Truncated partial sum of a digit string, straight from the definition.
    fn oracle(digits: &DigitString, basis: &Basis, terms: usize) -> Rational {
        let mut total = Rational::zero();
        let mut p = Rational::one();
        for n in 1..=terms {
            p /= int(basis.element(n) as i64);
            let e = int(digits.digit(n).unwrap() as i64);
            total += match digits.kind() {
                Kind::NegaD => alt_sign(n) * e * &p,
                Kind::NegaDn => -alt_sign(n) * (e + int(1)) * &p,
                Kind::PositiveD => e * &p,
            };
        }
        total
    }

    #[test]
    fn tail_sum_examples() {
        assert_eq!(tail_sum_exact(&c(2), 0).unwrap(), ratio(1, 3));
        assert_eq!(
            tail_sum_exact(&Basis::periodic(vec![2, 3]).unwrap(), 0).unwrap(),
            ratio(2, 5)
        );
        let f = Basis::rule(Rule::Factorial);
        assert_eq!(tail_sum_exact(&f, 0), Err(Error::ExactUnavailable));
        let e = tail_sum_enclosure(&f, 0, 20);
        assert!(e.width() < ratio(1, 1_000_000_000_000_000_000));
        // 1/e = 0.36787944117144232159552...
        let scale: num_bigint::BigInt = "100000000000000000000".parse().unwrap();
        let lo = Rational::new("36787944117144232159".parse().unwrap(), scale.clone());
        let hi = Rational::new("36787944117144232160".parse().unwrap(), scale);
        assert!(Interval::new(lo, hi).contains_interval(&e));
    }

    #[test]
    fn domain_examples() {
        assert_eq!(domain(&c(2)), Interval::new(ratio(-2, 3), ratio(1, 3)));
        assert_eq!(
            domain(&Basis::periodic(vec![2, 3]).unwrap()),
            Interval::new(ratio(-3, 5), ratio(2, 5))
        );
        assert_eq!(domain(&c(10)), Interval::new(ratio(-10, 11), ratio(1, 11)));
    }

    #[test]
    fn evaluate_examples() {
        let b = c(2);
        let v = |d: &DigitString| evaluate_exact(d, &b).unwrap();
        assert_eq!(v(&ds(vec![1], Tail::Zeros, &b)), ratio(-1, 2));
        assert_eq!(v(&ds(vec![], Tail::Periodic(vec![1]), &b)), ratio(-1, 3));
        assert_eq!(v(&ds(vec![1], Tail::Periodic(vec![1, 0]), &b)), ratio(-1, 6));
        assert_eq!(
            v(&DigitString::zeros(Kind::NegaDn)),
            ratio(1, 3)
        );
    }

    #[test]
    fn residual_examples() {
        assert_eq!(
            residual_bounds(&c(2), 1).unwrap(),
            Interval::new(ratio(-1, 6), ratio(1, 3))
        );
        assert_eq!(
            residual_bounds(&c(2), 2).unwrap(),
            Interval::new(ratio(-1, 6), ratio(1, 12))
        );
        assert!(residual_bounds(&c(7), 3).unwrap().contains(&Rational::zero()));
    }

    /// Brute-force extrema of the depth-`n` residual over all 20-digit tails
    /// sit within `1/(d_1 ... d_{n+20})` of the closed-form bounds.
    #[test]
    fn residual_bounds_match_brute_force() {
        let b = c(2);
        for n in 1..=3 {
            let bounds = residual_bounds(&b, n).unwrap();
            let depth = 14;
            let mut lo = Rational::one();
            let mut hi = -Rational::one();
            for mask in 0u32..(1 << depth) {
                let digits: Vec<u64> = (0..depth).map(|i| ((mask >> i) & 1) as u64).collect();
                let mut prefix = vec![0; n];
                prefix.extend(digits);
                let s = ds(prefix, Tail::Zeros, &b);
                let r = v_exact(&s, &b);
                lo = lo.min(r.clone());
                hi = hi.max(r);
            }
            let slack = recip(&b.prefix_product(n + depth));
            assert!((bounds.lo() - &lo).abs() <= slack);
            assert!((bounds.hi() - &hi).abs() <= slack);
        }
    }

    fn v_exact(d: &DigitString, b: &Basis) -> Rational {
        evaluate_exact(d, b).unwrap()
    }

    #[test]
    fn exact_agrees_with_truncation() {
        let bases = [
            c(2),
            c(5),
            Basis::periodic(vec![2, 3]).unwrap(),
            Basis::eventually_periodic(vec![5], vec![2, 3]).unwrap(),
            Basis::eventually_periodic(vec![4, 7], vec![3, 2, 5]).unwrap(),
        ];
        for b in &bases {
            for kind in [Kind::NegaD, Kind::NegaDn, Kind::PositiveD] {
                let s = DigitString::new(kind, vec![1, 0, 1], Tail::Periodic(vec![1, 0]), b).unwrap();
                let exact = v_exact(&s, b);
                let approx = oracle(&s, b, 40);
                assert!((exact - approx).abs() <= recip(&b.prefix_product(40)) * int(2));
            }
        }
    }

    #[test]
    fn enclosures_contain_exact() {
        let b = Basis::eventually_periodic(vec![5], vec![2, 3]).unwrap();
        for kind in [Kind::NegaD, Kind::NegaDn, Kind::PositiveD] {
            let s = DigitString::new(kind, vec![4, 1], Tail::Periodic(vec![0, 1, 1]), &b).unwrap();
            let x = v_exact(&s, &b);
            for depth in [0, 1, 2, 5, 9] {
                let e = evaluate(&s, &b, Mode::Interval(depth)).unwrap();
                assert!(e.contains(&x), "{kind:?} depth {depth}");
            }
            let t = DigitString::new(kind, s.first(6), Tail::Truncated, &b).unwrap();
            assert!(evaluate(&t, &b, Mode::Exact).unwrap().contains(&x));
        }
    }

    #[test]
    fn rule_basis_enclosure() {
        let f = Basis::rule(Rule::Primes);
        let s = DigitString::negad(vec![1, 2], Tail::Periodic(vec![1]), &f).unwrap();
        let e = evaluate(&s, &f, Mode::Interval(30)).unwrap().as_interval();
        let partial = oracle(&s, &f, 31);
        assert!(e.contains(&partial));
        assert!(e.width() <= recip(&f.prefix_product(30)) * int(2));
        let finite = DigitString::negad(vec![1, 2], Tail::Zeros, &f).unwrap();
        assert_eq!(
            evaluate_exact(&finite, &f).unwrap(),
            ratio(-1, 2) + ratio(2, 6)
        );
    }

    #[test]
    fn digit_linearity() {
        let b = Basis::periodic(vec![3, 4]).unwrap();
        let s = ds(vec![0, 1, 1], Tail::Periodic(vec![1, 2]), &b);
        let base = v_exact(&s, &b);
        for n in 1..=3 {
            let bumped = s.with_digit(n, s.digit(n).unwrap() + 1);
            let delta = v_exact(&bumped, &b) - &base;
            assert_eq!(delta, alt_sign(n) * recip(&b.prefix_product(n)));
        }
    }
}

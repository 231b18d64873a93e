//! Encoding rationals into nega-D digits, twin representations, ordering.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::basis::{Basis, Elements};
use crate::digits::{DigitString, Kind, Tail};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::par::{map_slice, Execution};
use crate::rational::{lcm, Rational};
use crate::series::{domain, tail_sum_enclosure, tail_sum_exact};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Terminating,
    PeriodicTail,
    TruncatedAtHorizon,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::Terminating => "terminating",
            Classification::PeriodicTail => "periodic",
            Classification::TruncatedAtHorizon => "truncated",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingResult {
    pub digits: DigitString,
    pub classification: Classification,
    pub steps_used: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct EncodeOptions {
    /// Maximum number of digits produced.
    pub horizon: usize,
    pub cycle_detection: bool,
}

impl EncodeOptions {
    pub fn new(horizon: usize) -> Self {
        EncodeOptions {
            horizon,
            cycle_detection: true,
        }
    }
}

const ENCLOSURE_START: usize = 32;
const ENCLOSURE_MAX: usize = 4096;

/// `a_n` by phase for periodic bases, refined enclosures for rule bases.
struct TailSums<'a> {
    basis: &'a Basis,
    exact: HashMap<usize, Rational>,
}

enum Choice {
    Digit(u64),
    /// `x` sits on a shared cylinder endpoint; `t` and `t + 1` both work.
    Tie(u64),
}

impl<'a> TailSums<'a> {
    fn new(basis: &'a Basis) -> Self {
        TailSums {
            basis,
            exact: HashMap::new(),
        }
    }

    /// Digit at position `n` for state `y`: the integers in `[t, t + 1]`
    /// with `t = -d_n y - a_n`.
    fn choose(&mut self, y: &Rational, n: usize) -> Result<Choice> {
        let d = self.basis.element(n);
        let dy = -(y * Rational::from_integer(BigInt::from(d)));
        if let Some(p) = self.basis.periodicity() {
            let phase = p.phase(n);
            let a = match self.exact.get(&phase) {
                Some(a) => a.clone(),
                None => {
                    let a = tail_sum_exact(self.basis, n)?;
                    self.exact.insert(phase, a.clone());
                    a
                }
            };
            let t = dy - a;
            return pick(&t, d, y);
        }
        let mut depth = ENCLOSURE_START;
        loop {
            let a = tail_sum_enclosure(self.basis, n, depth);
            let lo = &dy - a.hi();
            let hi = &dy - a.lo();
            let (clo, chi) = (lo.ceil(), hi.ceil());
            if clo == chi && !lo.is_integer() && !hi.is_integer() {
                return pick(&lo, d, y);
            }
            if depth >= ENCLOSURE_MAX {
                return Err(Error::Undecidable(depth));
            }
            depth *= 2;
        }
    }
}

fn pick(t: &Rational, d: u64, y: &Rational) -> Result<Choice> {
    let out_of_domain = || Error::OutOfDomain(crate::rational::format(y));
    let c = t.ceil().to_integer();
    let last = BigInt::from(d - 1);
    if t.is_integer() {
        let lo = c.clone().max(BigInt::from(0));
        let hi = (c + BigInt::from(1)).min(last);
        if lo > hi {
            return Err(out_of_domain());
        }
        let lo = u64::try_from(lo).map_err(|_| out_of_domain())?;
        let hi = u64::try_from(hi).map_err(|_| out_of_domain())?;
        return Ok(if lo == hi { Choice::Digit(lo) } else { Choice::Tie(lo) });
    }
    if c.is_negative() || c > last {
        return Err(out_of_domain());
    }
    Ok(Choice::Digit(u64::try_from(c).map_err(|_| out_of_domain())?))
}

pub fn encode(x: &Rational, basis: &Basis, horizon: usize) -> Result<EncodingResult> {
    encode_with(x, basis, EncodeOptions::new(horizon))
}

/// Greedy cylinder selection: the n-th digit is the unique `e_n` whose
/// cylinder contains `x`; shared endpoints emit the canonical closed-form tail.
pub fn encode_with(x: &Rational, basis: &Basis, opts: EncodeOptions) -> Result<EncodingResult> {
    if !domain(basis).contains(x) {
        return Err(Error::OutOfDomain(crate::rational::format(x)));
    }
    let periodicity = basis.periodicity();
    let mut sums = TailSums::new(basis);
    let mut digits: Vec<u64> = Vec::new();
    let mut seen: HashMap<(Rational, usize), usize> = HashMap::new();
    let mut y = x.clone();
    let finish = |prefix: Vec<u64>, tail: Tail, class, steps| EncodingResult {
        digits: DigitString::raw(Kind::NegaD, prefix, tail).normalized(),
        classification: class,
        steps_used: steps,
    };
    loop {
        let n = digits.len();
        if y.is_zero() {
            return Ok(finish(digits, Tail::Zeros, Classification::Terminating, n));
        }
        if opts.cycle_detection {
            if let Some(p) = &periodicity {
                let key = (y.clone(), p.phase(n));
                if let Some(&start) = seen.get(&key) {
                    let period = digits[start..].to_vec();
                    digits.truncate(start);
                    return Ok(finish(
                        digits,
                        Tail::Periodic(period),
                        Classification::PeriodicTail,
                        n,
                    ));
                }
                seen.insert(key, n);
            }
        }
        if n >= opts.horizon {
            if opts.cycle_detection || periodicity.is_none() {
                return Ok(EncodingResult {
                    digits: DigitString::raw(Kind::NegaD, digits, Tail::Truncated),
                    classification: Classification::TruncatedAtHorizon,
                    steps_used: n,
                });
            }
            return Err(Error::HorizonExceeded(opts.horizon));
        }
        let pos = n + 1;
        match sums.choose(&y, pos)? {
            Choice::Digit(e) => {
                digits.push(e);
                y = -(&y * Rational::from_integer(BigInt::from(basis.element(pos))))
                    - Rational::from_integer(BigInt::from(e));
            }
            Choice::Tie(t) => {
                digits.push(t + 1);
                return Ok(match alternating_tail(basis, pos, Pattern::High) {
                    Some((more, period)) => {
                        digits.extend(more);
                        finish(digits, Tail::Periodic(period), Classification::PeriodicTail, pos)
                    }
                    None => {
                        let steps = pos;
                        while digits.len() < opts.horizon {
                            let k = digits.len() + 1;
                            digits.push(Pattern::High.digit(basis, k, pos + 1));
                        }
                        EncodingResult {
                            digits: DigitString::raw(Kind::NegaD, digits, Tail::Truncated),
                            classification: Classification::TruncatedAtHorizon,
                            steps_used: steps,
                        }
                    }
                });
            }
        }
    }
}

/// Canonical digits `e_1 .. e_steps` of `x` and the shift orbit
/// `x, phi(x), ..., phi^steps(x)` with `phi(y) = -d_n y - e_n`.
pub fn orbit(x: &Rational, basis: &Basis, steps: usize) -> Result<(Vec<u64>, Vec<Rational>)> {
    if !domain(basis).contains(x) {
        return Err(Error::OutOfDomain(crate::rational::format(x)));
    }
    let mut sums = TailSums::new(basis);
    let mut digits = Vec::with_capacity(steps);
    let mut states = vec![x.clone()];
    for pos in 1..=steps {
        let y = &states[pos - 1];
        let e = match sums.choose(y, pos)? {
            Choice::Digit(e) => e,
            Choice::Tie(t) => t + 1,
        };
        let next = -(y * Rational::from_integer(BigInt::from(basis.element(pos))))
            - Rational::from_integer(BigInt::from(e));
        digits.push(e);
        states.push(next);
    }
    Ok((digits, states))
}

/// Encodes many values, in parallel when requested; order is preserved.
pub fn encode_many(
    xs: &[Rational],
    basis: &Basis,
    horizon: usize,
    exec: Execution,
) -> Vec<Result<EncodingResult>> {
    map_slice(exec, xs, |x| encode(x, basis, horizon))
}

/// The two alternating tails that produce shared cylinder endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pattern {
    /// `d - 1, 0, d - 1, 0, ...` from the first position.
    High,
    /// `0, d - 1, 0, d - 1, ...`; the excluded (non-canonical) form.
    Low,
}

impl Pattern {
    fn other(self) -> Pattern {
        match self {
            Pattern::High => Pattern::Low,
            Pattern::Low => Pattern::High,
        }
    }

    /// Digit at position `k` of the pattern starting at position `from`.
    fn digit(self, basis: &impl Elements, k: usize, from: usize) -> u64 {
        let high = ((k - from) % 2 == 0) == (self == Pattern::High);
        if high {
            basis.element(k) - 1
        } else {
            0
        }
    }
}

/// Digits `after+1 ..` of a pattern as (extra prefix, period); `None` when the
/// basis is not eventually periodic.
fn alternating_tail(basis: &impl Elements, after: usize, pattern: Pattern) -> Option<(Vec<u64>, Vec<u64>)> {
    let p = basis.periodicity()?;
    let from = after + 1;
    let start = after.max(p.start);
    let len = lcm(p.len(), 2);
    let prefix = (from..=start).map(|k| pattern.digit(basis, k, from)).collect();
    let period = (start + 1..=start + len)
        .map(|k| pattern.digit(basis, k, from))
        .collect();
    Some((prefix, period))
}

/// Smallest `m` with a pattern holding from position `m + 1`, if any.
fn find_pattern(digits: &DigitString, basis: &Basis) -> Option<(usize, Pattern)> {
    let p = basis.periodicity()?;
    let (ds, dp) = digits.periodicity()?;
    let start = ds.max(p.start);
    let len = lcm(lcm(dp.len(), p.len()), 2);
    let holds = |pattern: Pattern, from: usize| {
        let end = from.max(start + 1) + len - 1;
        (from..=end).all(|k| digits.digit(k) == Some(pattern.digit(basis, k, from)))
    };
    (0..=start + len).find_map(|m| {
        [Pattern::High, Pattern::Low]
            .into_iter()
            .find(|&pat| holds(pat, m + 1))
            .map(|pat| (m, pat))
    })
}

fn check_negad(digits: &DigitString, basis: &Basis) -> Result<()> {
    if digits.kind() != Kind::NegaD {
        return Err(Error::UnsupportedKind(digits.kind()));
    }
    digits.revalidate(basis)
}

/// The other representation of a nega-D-rational number.
///
/// `(e_m, high tail)` and `(e_m - 1, low tail)` describe the same number. A
/// pattern starting at the first position marks a domain endpoint, which has
/// a single representation.
pub fn twin(digits: &DigitString, basis: &Basis) -> Result<Option<DigitString>> {
    check_negad(digits, basis)?;
    let Some((m, pattern)) = find_pattern(digits, basis) else {
        return Ok(None);
    };
    if m == 0 {
        return Ok(None);
    }
    let e = digits.digit(m).unwrap_or(0);
    let adjusted = match pattern {
        Pattern::High => e - 1,
        Pattern::Low => e + 1,
    };
    let mut prefix = digits.first(m);
    prefix[m - 1] = adjusted;
    let (more, period) = alternating_tail(basis, m, pattern.other()).expect("periodic basis");
    prefix.extend(more);
    Ok(Some(
        DigitString::raw(Kind::NegaD, prefix, Tail::Periodic(period)).normalized(),
    ))
}

/// Replaces the excluded low-tail form by its twin; other inputs come back
/// unchanged apart from `Periodic([0])` becoming `Zeros`.
pub fn canonicalize(digits: &DigitString, basis: &Basis) -> Result<DigitString> {
    check_negad(digits, basis)?;
    if let Some((m, Pattern::Low)) = find_pattern(digits, basis) {
        if m > 0 {
            return Ok(twin(digits, basis)?.expect("low tail has a twin"));
        }
    }
    if matches!(digits.tail(), Tail::Periodic(p) if p.iter().all(|&c| c == 0)) {
        return Ok(DigitString::raw(Kind::NegaD, digits.prefix().to_vec(), Tail::Zeros));
    }
    Ok(digits.clone())
}

pub fn is_nega_d_rational(digits: &DigitString, basis: &Basis) -> Result<bool> {
    Ok(twin(digits, basis)?.is_some())
}

/// Numeric order of two NegaD strings read from their digits: at the first
/// difference, an even position favours the larger digit, an odd position the
/// smaller one.
pub fn compare(a: &DigitString, b: &DigitString, basis: &Basis) -> Result<Ordering> {
    let a = canonicalize(a, basis)?;
    let b = canonicalize(b, basis)?;
    let horizon = match (a.periodicity(), b.periodicity()) {
        (Some((sa, pa)), Some((sb, pb))) => sa.max(sb) + lcm(pa.len(), pb.len()),
        _ => a.prefix().len().max(b.prefix().len()),
    };
    for n in 1..=horizon {
        match (a.digit(n), b.digit(n)) {
            (Some(x), Some(y)) if x != y => {
                let ord = x.cmp(&y);
                return Ok(if n % 2 == 0 { ord } else { ord.reverse() });
            }
            (Some(_), Some(_)) => {}
            _ => return Err(Error::TruncatedTail),
        }
    }
    if a.is_truncated() || b.is_truncated() {
        return Err(Error::TruncatedTail);
    }
    Ok(Ordering::Equal)
}

/// Closed rank-`m` cylinder of the first `m` digits: `g_m` plus the residual range.
pub(crate) fn cylinder_of(prefix: &[u64], basis: &Basis) -> Result<Interval> {
    let s = DigitString::raw(Kind::NegaD, prefix.to_vec(), Tail::Zeros);
    let m = prefix.len();
    let g = crate::series::prefix_value(&s, m, basis);
    let r = crate::series::residual_bounds(basis, m)?;
    Ok(r.shift(&g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::series::evaluate_exact;

    fn c(d: u64) -> Basis {
        Basis::constant(d).unwrap()
    }

    fn ds(prefix: Vec<u64>, tail: Tail, b: &Basis) -> DigitString {
        DigitString::negad(prefix, tail, b).unwrap()
    }

    #[test]
    fn encode_examples() {
        let b = c(2);
        let r = encode(&int(0), &b, 32).unwrap();
        assert_eq!(r.digits, DigitString::zeros(Kind::NegaD));
        assert_eq!(r.classification, Classification::Terminating);

        let r = encode(&ratio(-1, 6), &b, 32).unwrap();
        assert_eq!(r.digits, ds(vec![1], Tail::Periodic(vec![1, 0]), &b));
        assert_eq!(r.classification, Classification::PeriodicTail);

        let r = encode(&ratio(1, 3), &b, 32).unwrap();
        assert_eq!(r.digits, ds(vec![], Tail::Periodic(vec![0, 1]), &b));
    }

    #[test]
    fn encode_rejects_outside_domain() {
        assert!(matches!(
            encode(&ratio(1, 2), &c(2), 32),
            Err(Error::OutOfDomain(_))
        ));
        assert!(encode(&ratio(-2, 3), &c(2), 32).is_ok());
    }

    #[test]
    fn horizon_behaviour() {
        let b = c(2);
        let opts = EncodeOptions {
            horizon: 4,
            cycle_detection: false,
        };
        assert_eq!(
            encode_with(&ratio(-1, 7), &b, opts),
            Err(Error::HorizonExceeded(4))
        );
        let r = encode_with(&ratio(-1, 2), &b, opts).unwrap();
        assert_eq!(r.classification, Classification::Terminating);
        let r = encode(&ratio(-1, 7), &c(2), 2).unwrap();
        assert_eq!(r.classification, Classification::TruncatedAtHorizon);
        assert_eq!(r.digits.prefix().len(), 2);
    }

    #[test]
    fn encode_over_rule_basis() {
        let f = Basis::rule(crate::basis::Rule::Factorial);
        let x = ratio(-1, 6);
        let r = encode(&x, &f, 40).unwrap();
        assert_eq!(r.classification, Classification::Terminating);
        assert_eq!(evaluate_exact(&r.digits, &f).unwrap(), x);
    }

    #[test]
    fn twin_examples() {
        let b = c(2);
        let t = twin(&ds(vec![1], Tail::Periodic(vec![1, 0]), &b), &b).unwrap().unwrap();
        assert!(t.same_sequence(&ds(vec![0, 0], Tail::Periodic(vec![1, 0]), &b)));
        assert_eq!(evaluate_exact(&t, &b).unwrap(), ratio(-1, 6));
        assert_eq!(twin(&ds(vec![1], Tail::Zeros, &b), &b).unwrap(), None);
        assert_eq!(twin(&ds(vec![], Tail::Periodic(vec![0]), &b), &b).unwrap(), None);
        // endpoints of the domain
        assert_eq!(twin(&ds(vec![], Tail::Periodic(vec![0, 1]), &b), &b).unwrap(), None);
        assert_eq!(twin(&ds(vec![], Tail::Periodic(vec![1, 0]), &b), &b).unwrap(), None);
    }

    #[test]
    fn canonicalize_examples() {
        let b = c(2);
        let low = ds(vec![0, 0], Tail::Periodic(vec![1, 0]), &b);
        let high = ds(vec![1], Tail::Periodic(vec![1, 0]), &b);
        assert_eq!(canonicalize(&low, &b).unwrap(), high);
        assert_eq!(canonicalize(&high, &b).unwrap(), high);
        let b3 = c(3);
        let s = ds(vec![2, 1], Tail::Zeros, &b3);
        assert_eq!(canonicalize(&s, &b3).unwrap(), s);
    }

    #[test]
    fn rationality_flags() {
        let b = c(2);
        assert!(is_nega_d_rational(&ds(vec![1], Tail::Periodic(vec![1, 0]), &b), &b).unwrap());
        assert!(!is_nega_d_rational(&ds(vec![], Tail::Periodic(vec![1]), &b), &b).unwrap());
        assert!(!is_nega_d_rational(&ds(vec![], Tail::Zeros, &b), &b).unwrap());
    }

    #[test]
    fn compare_examples() {
        let b = c(2);
        let one = ds(vec![1], Tail::Zeros, &b);
        let zero = ds(vec![0], Tail::Zeros, &b);
        assert_eq!(compare(&one, &zero, &b).unwrap(), Ordering::Less);
        assert_eq!(compare(&one, &one, &b).unwrap(), Ordering::Equal);
        let a = ds(vec![0, 1], Tail::Zeros, &b);
        assert_eq!(compare(&a, &zero, &b).unwrap(), Ordering::Greater);
        let low = ds(vec![0, 0], Tail::Periodic(vec![1, 0]), &b);
        let high = ds(vec![1], Tail::Periodic(vec![1, 0]), &b);
        assert_eq!(compare(&low, &high, &b).unwrap(), Ordering::Equal);
    }

    #[test]
    fn tie_over_mixed_basis() {
        let b = Basis::eventually_periodic(vec![5], vec![2, 3]).unwrap();
        // left endpoint of the first-rank cylinder [1] is shared with [2]
        let edge = cylinder_of(&[1], &b).unwrap();
        for x in [edge.lo().clone(), edge.hi().clone()] {
            let r = encode(&x, &b, 64).unwrap();
            assert_eq!(evaluate_exact(&r.digits, &b).unwrap(), x);
            assert_eq!(canonicalize(&r.digits, &b).unwrap(), r.digits);
        }
    }
}

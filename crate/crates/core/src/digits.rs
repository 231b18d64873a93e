//! Digit strings: a finite prefix plus a symbolic tail.

use std::fmt;

use crate::basis::Elements;
use crate::error::{Error, Result};

/// Series convention a digit string is read under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// `sum (-1)^n e_n / (d_1 ... d_n)`.
    NegaD,
    /// `sum (1 + e_n) (-1)^(n+1) / (d_1 ... d_n)`.
    NegaDn,
    /// `sum e_n / (d_1 ... d_n)`.
    PositiveD,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::NegaD => "negad",
            Kind::NegaDn => "negadn",
            Kind::PositiveD => "posd",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        match name {
            "negad" => Some(Kind::NegaD),
            "negadn" => Some(Kind::NegaDn),
            "posd" => Some(Kind::PositiveD),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    Zeros,
    /// Repeats forever; never empty.
    Periodic(Vec<u64>),
    /// Digits past the prefix are unknown.
    Truncated,
}

/// Unvalidated digit-string parts, e.g. straight from a parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSpec {
    pub kind: Kind,
    pub prefix: Vec<u64>,
    pub tail: Tail,
}

impl DigitSpec {
    pub fn validate(self, basis: &impl Elements) -> Result<DigitString> {
        DigitString::new(self.kind, self.prefix, self.tail, basis)
    }
}

/// Digits `e_1 e_2 ...` checked against a basis at construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitString {
    kind: Kind,
    prefix: Vec<u64>,
    tail: Tail,
}

impl DigitString {
    pub fn new(kind: Kind, prefix: Vec<u64>, tail: Tail, basis: &impl Elements) -> Result<Self> {
        if matches!(&tail, Tail::Periodic(p) if p.is_empty()) {
            return Err(Error::EmptyPeriod);
        }
        let s = DigitString { kind, prefix, tail };
        s.check(basis)?;
        Ok(s)
    }

    /// Shorthand for a NegaD string.
    pub fn negad(prefix: Vec<u64>, tail: Tail, basis: &impl Elements) -> Result<Self> {
        Self::new(Kind::NegaD, prefix, tail, basis)
    }

    /// Caller guarantees validity against the basis it will be used with.
    pub(crate) fn raw(kind: Kind, prefix: Vec<u64>, tail: Tail) -> Self {
        debug_assert!(!matches!(&tail, Tail::Periodic(p) if p.is_empty()));
        DigitString { kind, prefix, tail }
    }

    pub fn zeros(kind: Kind) -> Self {
        DigitString::raw(kind, Vec::new(), Tail::Zeros)
    }

    fn check(&self, basis: &impl Elements) -> Result<()> {
        let horizon = match &self.tail {
            Tail::Periodic(p) => basis.validation_horizon(self.prefix.len(), p.len()),
            _ => self.prefix.len(),
        };
        for n in 1..=horizon {
            let digit = self.digit(n).unwrap_or(0);
            let element = basis.element(n);
            if digit >= element {
                return Err(Error::DigitOutOfRange {
                    position: n,
                    digit,
                    element,
                });
            }
        }
        Ok(())
    }

    /// Revalidates against another basis.
    pub fn revalidate(&self, basis: &impl Elements) -> Result<()> {
        self.check(basis)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn is_truncated(&self) -> bool {
        matches!(self.tail, Tail::Truncated)
    }

    /// `e_n` for `n >= 1`; `None` past the prefix of a truncated string.
    pub fn digit(&self, n: usize) -> Option<u64> {
        assert!(n >= 1, "positions start at 1");
        if n <= self.prefix.len() {
            return Some(self.prefix[n - 1]);
        }
        match &self.tail {
            Tail::Zeros => Some(0),
            Tail::Periodic(p) => Some(p[(n - self.prefix.len() - 1) % p.len()]),
            Tail::Truncated => None,
        }
    }

    /// First `n` digits (zero-filled past a truncated prefix).
    pub fn first(&self, n: usize) -> Vec<u64> {
        (1..=n).map(|i| self.digit(i).unwrap_or(0)).collect()
    }

    /// `(start, period)` of the digit sequence; Zeros counts as period `[0]`.
    pub fn periodicity(&self) -> Option<(usize, Vec<u64>)> {
        match &self.tail {
            Tail::Zeros => Some((self.prefix.len(), vec![0])),
            Tail::Periodic(p) => Some((self.prefix.len(), p.clone())),
            Tail::Truncated => None,
        }
    }

    /// Number of nonzero digits, `None` when infinite or unknown.
    pub fn nonzero_count(&self) -> Option<usize> {
        let prefix = self.prefix.iter().filter(|&&c| c != 0).count();
        match &self.tail {
            Tail::Zeros => Some(prefix),
            Tail::Periodic(p) if p.iter().all(|&c| c == 0) => Some(prefix),
            _ => None,
        }
    }

    /// Same digits, other convention; digit ranges do not depend on kind.
    pub fn with_kind(&self, kind: Kind) -> DigitString {
        DigitString { kind, ..self.clone() }
    }

    /// Shortest descriptor of the same sequence: minimal period, shortest
    /// prefix, `Periodic([0])` folded into `Zeros`, no trailing prefix zeros
    /// before a `Zeros` tail.
    pub fn normalized(&self) -> DigitString {
        let mut prefix = self.prefix.clone();
        let tail = match &self.tail {
            Tail::Truncated => Tail::Truncated,
            Tail::Zeros => Tail::Zeros,
            Tail::Periodic(p) => {
                let mut period = minimal_period(p);
                while let (Some(&a), Some(&b)) = (prefix.last(), period.last()) {
                    if a != b {
                        break;
                    }
                    prefix.pop();
                    period.rotate_right(1);
                }
                if period == [0] {
                    Tail::Zeros
                } else {
                    Tail::Periodic(period)
                }
            }
        };
        if tail == Tail::Zeros {
            while prefix.last() == Some(&0) {
                prefix.pop();
            }
        }
        DigitString {
            kind: self.kind,
            prefix,
            tail,
        }
    }

    /// Whether both describe the same digit sequence (kind ignored).
    pub fn same_sequence(&self, other: &DigitString) -> bool {
        let a = self.normalized();
        let b = other.normalized();
        a.prefix == b.prefix && a.tail == b.tail
    }

    /// Equivalent descriptor whose prefix has at least `min_prefix` digits and
    /// whose period length is a multiple of `period_multiple`.
    pub fn unroll(&self, min_prefix: usize, period_multiple: usize) -> DigitString {
        let mut prefix = self.prefix.clone();
        while prefix.len() < min_prefix && !self.is_truncated() {
            let n = prefix.len() + 1;
            prefix.push(self.digit(n).unwrap_or(0));
        }
        let tail = match &self.tail {
            Tail::Periodic(p) => {
                let start = prefix.len();
                let len = crate::rational::lcm(p.len(), period_multiple.max(1));
                Tail::Periodic(
                    (start + 1..=start + len)
                        .map(|n| self.digit(n).unwrap_or(0))
                        .collect(),
                )
            }
            other => other.clone(),
        };
        DigitString {
            kind: self.kind,
            prefix,
            tail,
        }
    }

    /// Digits `e_{k+1} e_{k+2} ...`, valid over the basis advanced by `k`.
    pub fn dropped(&self, k: usize) -> DigitString {
        if k <= self.prefix.len() {
            return DigitString {
                kind: self.kind,
                prefix: self.prefix[k..].to_vec(),
                tail: self.tail.clone(),
            };
        }
        let tail = match &self.tail {
            Tail::Zeros => Tail::Zeros,
            Tail::Truncated => Tail::Truncated,
            Tail::Periodic(p) => {
                let mut rotated = p.clone();
                rotated.rotate_left((k - self.prefix.len()) % p.len());
                Tail::Periodic(rotated)
            }
        };
        DigitString {
            kind: self.kind,
            prefix: Vec::new(),
            tail,
        }
    }

    /// The string with digit `m` removed, valid over the basis with position
    /// `m` deleted.
    pub fn removed(&self, m: usize) -> DigitString {
        assert!(m >= 1, "positions start at 1");
        if self.is_truncated() && m > self.prefix.len() {
            return self.clone();
        }
        let unrolled = self.unroll(m, 1);
        let mut prefix = unrolled.prefix;
        prefix.remove(m - 1);
        DigitString {
            kind: self.kind,
            prefix,
            tail: unrolled.tail,
        }
    }

    /// Replaces digit `n` (unrolling the tail if needed). Unchecked.
    #[cfg(test)]
    pub(crate) fn with_digit(&self, n: usize, value: u64) -> DigitString {
        let mut s = self.unroll(n, 1);
        s.prefix[n - 1] = value;
        s
    }
}

fn minimal_period(p: &[u64]) -> Vec<u64> {
    let n = p.len();
    (1..=n)
        .find(|&len| n % len == 0 && (len..n).all(|i| p[i] == p[i - len]))
        .map(|len| p[..len].to_vec())
        .unwrap_or_else(|| p.to_vec())
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Renders the command-line digit grammar, e.g. `1;tail=periodic:1,0`.
impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join(&self.prefix))?;
        match &self.tail {
            Tail::Zeros => {}
            Tail::Periodic(p) => write!(f, ";tail=periodic:{}", join(p))?,
            Tail::Truncated => write!(f, ";tail=trunc")?,
        }
        if self.kind != Kind::NegaD {
            write!(f, ";kind={}", self.kind.name())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{Basis, Rule};

    fn c2() -> Basis {
        Basis::constant(2).unwrap()
    }

    #[test]
    fn validation_covers_periodic_tail() {
        let b = Basis::periodic(vec![2, 3]).unwrap();
        assert!(DigitString::negad(vec![], Tail::Periodic(vec![1, 2]), &b).is_ok());
        assert_eq!(
            DigitString::negad(vec![], Tail::Periodic(vec![2, 1]), &b),
            Err(Error::DigitOutOfRange {
                position: 1,
                digit: 2,
                element: 2
            })
        );
        // phase only misaligns on the second lap of the digit period
        assert_eq!(
            DigitString::negad(vec![], Tail::Periodic(vec![1, 2, 1]), &b).unwrap_err(),
            Error::DigitOutOfRange {
                position: 5,
                digit: 2,
                element: 2
            }
        );
        assert_eq!(
            DigitString::negad(vec![], Tail::Periodic(vec![]), &b),
            Err(Error::EmptyPeriod)
        );
    }

    #[test]
    fn validation_over_rule_basis() {
        let f = Basis::rule(Rule::Factorial);
        assert!(DigitString::negad(vec![1, 2], Tail::Periodic(vec![1]), &f).is_ok());
        assert!(DigitString::negad(vec![], Tail::Periodic(vec![0, 2]), &f).is_ok());
        assert!(DigitString::negad(vec![], Tail::Periodic(vec![2]), &f).is_err());
    }

    #[test]
    fn normalization() {
        let b = c2();
        let s = DigitString::negad(vec![1, 1, 0], Tail::Periodic(vec![1, 0, 1, 0]), &b).unwrap();
        let n = s.normalized();
        assert_eq!(n.prefix(), &[1]);
        assert_eq!(n.tail(), &Tail::Periodic(vec![1, 0]));
        let z = DigitString::negad(vec![1, 0, 0], Tail::Periodic(vec![0]), &b).unwrap();
        assert_eq!(z.normalized().prefix(), &[1]);
        assert_eq!(z.normalized().tail(), &Tail::Zeros);
        assert!(s.same_sequence(&n));
    }

    #[test]
    fn drop_remove_unroll() {
        let b = c2();
        let s = DigitString::negad(vec![1], Tail::Periodic(vec![1, 0]), &b).unwrap();
        assert_eq!(s.first(6), vec![1, 1, 0, 1, 0, 1]);
        assert_eq!(s.dropped(2).first(4), vec![0, 1, 0, 1]);
        assert_eq!(s.removed(2).first(4), vec![1, 0, 1, 0]);
        let u = s.unroll(4, 4);
        assert_eq!(u.prefix().len(), 4);
        assert_eq!(u.first(12), s.first(12));
        match u.tail() {
            Tail::Periodic(p) => assert_eq!(p.len(), 4),
            _ => panic!(),
        }
    }

    #[test]
    fn display_grammar() {
        let b = c2();
        let s = DigitString::negad(vec![1], Tail::Periodic(vec![1, 0]), &b).unwrap();
        assert_eq!(s.to_string(), "1;tail=periodic:1,0");
        assert_eq!(s.with_kind(Kind::NegaDn).to_string(), "1;tail=periodic:1,0;kind=negadn");
        assert_eq!(DigitString::zeros(Kind::NegaD).to_string(), "");
    }
}

//! Basis sequences `(d_n)` of the series.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::lcm;

/// Built-in unbounded bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `d_n = n + 1`, so `d_1 ... d_n = (n + 1)!`.
    Factorial,
    /// `d_n` is the n-th prime.
    Primes,
    /// `d_n = 2n`.
    Even,
}

impl Rule {
    fn raw(self, i: u64) -> u64 {
        match self {
            Rule::Factorial => i + 1,
            Rule::Even => 2 * i,
            Rule::Primes => nth_prime(i as usize),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rule::Factorial => "factorial",
            Rule::Primes => "primes",
            Rule::Even => "even",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Constant(u64),
    EventuallyPeriodic { prefix: Vec<u64>, period: Vec<u64> },
    /// `head` followed by `rule(offset + 1), rule(offset + 2), ...`. Shifting or
    /// deleting positions of a rule basis moves elements into `head`/`offset`.
    Rule { rule: Rule, head: Vec<u64>, offset: u64 },
}

/// Eventual periodic structure: for `n > start`,
/// `d_n = period[(n - start - 1) % period.len()]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Periodicity {
    pub start: usize,
    pub period: Vec<u64>,
}

impl Periodicity {
    pub fn len(&self) -> usize {
        self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        self.period.is_empty()
    }

    /// Element at an absolute position `n > start`.
    pub fn periodic_element(&self, n: usize) -> u64 {
        debug_assert!(n > self.start);
        self.period[(n - self.start - 1) % self.period.len()]
    }

    /// Phase of the suffix starting after position `n`. Two positions with the
    /// same phase have identical element suffixes.
    pub fn phase(&self, n: usize) -> usize {
        if n < self.start {
            n
        } else {
            self.start + (n - self.start) % self.period.len()
        }
    }
}

/// Anything that supplies the elements `d_1, d_2, ...` of a series.
pub trait Elements {
    /// `d_n` for `n >= 1`.
    fn element(&self, n: usize) -> u64;

    /// Eventual periodicity, if the sequence has one.
    fn periodicity(&self) -> Option<Periodicity>;

    /// Position after which elements never decrease; only consulted for
    /// sequences without periodicity.
    fn nondecreasing_after(&self) -> usize {
        0
    }

    fn product(&self, from: usize, to: usize) -> BigUint {
        (from..=to).fold(BigUint::one(), |acc, n| acc * self.element(n))
    }

    /// Number of leading positions whose validation covers every position of
    /// a digit string with preperiod `digit_start` and period `digit_period`.
    fn validation_horizon(&self, digit_start: usize, digit_period: usize) -> usize {
        match self.periodicity() {
            Some(p) => digit_start.max(p.start) + lcm(digit_period, p.len()),
            None => digit_start.max(self.nondecreasing_after()) + digit_period,
        }
    }
}

/// The element sequence `(d_n)`, every `d_n >= 2`.
#[derive(Clone)]
pub struct Basis {
    kind: BasisKind,
    products: Arc<Mutex<Vec<BigUint>>>,
}

impl Basis {
    fn from_kind(kind: BasisKind) -> Self {
        Basis {
            kind,
            products: Arc::new(Mutex::new(vec![BigUint::one()])),
        }
    }

    pub fn constant(d: u64) -> Result<Self> {
        check_elements(&[d], 1)?;
        Ok(Self::from_kind(BasisKind::Constant(d)))
    }

    pub fn eventually_periodic(prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        check_elements(&prefix, 1)?;
        check_elements(&period, prefix.len() + 1)?;
        Ok(Self::from_kind(BasisKind::EventuallyPeriodic { prefix, period }))
    }

    pub fn periodic(period: Vec<u64>) -> Result<Self> {
        Self::eventually_periodic(Vec::new(), period)
    }

    pub fn rule(rule: Rule) -> Self {
        Self::from_kind(BasisKind::Rule {
            rule,
            head: Vec::new(),
            offset: 0,
        })
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    /// `d_1 d_2 ... d_n`, memoized; `n = 0` gives 1.
    pub fn prefix_product(&self, n: usize) -> BigUint {
        let mut cache = self.products.lock().unwrap_or_else(|e| e.into_inner());
        while cache.len() <= n {
            let next = cache.len();
            let value = &cache[next - 1] * self.element(next);
            cache.push(value);
        }
        cache[n].clone()
    }

    /// The shifted basis `d_{k+1}, d_{k+2}, ...`.
    pub fn advance(&self, k: usize) -> Basis {
        let kind = match &self.kind {
            BasisKind::Constant(d) => BasisKind::Constant(*d),
            BasisKind::EventuallyPeriodic { prefix, period } => {
                if k <= prefix.len() {
                    BasisKind::EventuallyPeriodic {
                        prefix: prefix[k..].to_vec(),
                        period: period.clone(),
                    }
                } else {
                    let mut period = period.clone();
                    let r = (k - prefix.len()) % period.len();
                    period.rotate_left(r);
                    BasisKind::EventuallyPeriodic {
                        prefix: Vec::new(),
                        period,
                    }
                }
            }
            BasisKind::Rule { rule, head, offset } => {
                if k <= head.len() {
                    BasisKind::Rule {
                        rule: *rule,
                        head: head[k..].to_vec(),
                        offset: *offset,
                    }
                } else {
                    BasisKind::Rule {
                        rule: *rule,
                        head: Vec::new(),
                        offset: offset + (k - head.len()) as u64,
                    }
                }
            }
        };
        Basis::from_kind(kind)
    }

    /// The basis with position `m` removed.
    pub fn delete(&self, m: usize) -> Basis {
        assert!(m >= 1, "positions start at 1");
        let kind = match &self.kind {
            BasisKind::Constant(d) => BasisKind::Constant(*d),
            BasisKind::EventuallyPeriodic { prefix, period } => {
                if m <= prefix.len() {
                    let mut prefix = prefix.clone();
                    prefix.remove(m - 1);
                    BasisKind::EventuallyPeriodic {
                        prefix,
                        period: period.clone(),
                    }
                } else {
                    let mut new_prefix: Vec<u64> = (1..m).map(|n| self.element(n)).collect();
                    new_prefix.shrink_to_fit();
                    let mut period = period.clone();
                    let r = (m - prefix.len()) % period.len();
                    period.rotate_left(r);
                    BasisKind::EventuallyPeriodic {
                        prefix: new_prefix,
                        period,
                    }
                }
            }
            BasisKind::Rule { rule, head, offset } => {
                if m <= head.len() {
                    let mut head = head.clone();
                    head.remove(m - 1);
                    BasisKind::Rule {
                        rule: *rule,
                        head,
                        offset: *offset,
                    }
                } else {
                    let skipped = (m - head.len()) as u64;
                    let mut new_head = head.clone();
                    new_head.extend((1..skipped).map(|i| rule.raw(offset + i)));
                    BasisKind::Rule {
                        rule: *rule,
                        head: new_head,
                        offset: offset + skipped,
                    }
                }
            }
        };
        Basis::from_kind(kind)
    }

    /// True for constant and eventually periodic bases.
    pub fn is_exact(&self) -> bool {
        !matches!(self.kind, BasisKind::Rule { .. })
    }

    /// Largest element, `None` when the basis is unbounded.
    pub fn max_element(&self) -> Option<u64> {
        match &self.kind {
            BasisKind::Constant(d) => Some(*d),
            BasisKind::EventuallyPeriodic { prefix, period } => {
                prefix.iter().chain(period).copied().max()
            }
            BasisKind::Rule { .. } => None,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.max_element().is_some()
    }

    /// `d_{n+1} <= d_n` for every `n`.
    pub fn is_nonincreasing(&self) -> bool {
        match &self.kind {
            BasisKind::Constant(_) => true,
            BasisKind::EventuallyPeriodic { prefix, period } => {
                let horizon = prefix.len() + period.len() + 1;
                (1..horizon).all(|n| self.element(n + 1) <= self.element(n))
            }
            BasisKind::Rule { .. } => false,
        }
    }

    /// Whether the basis is purely periodic with a period length dividing `m`.
    pub fn is_purely_periodic_dividing(&self, m: usize) -> bool {
        match self.periodicity() {
            Some(p) => p.start == 0 && m % p.len() == 0,
            None => false,
        }
    }
}

impl Elements for Basis {
    fn element(&self, n: usize) -> u64 {
        assert!(n >= 1, "positions start at 1");
        match &self.kind {
            BasisKind::Constant(d) => *d,
            BasisKind::EventuallyPeriodic { prefix, period } => {
                if n <= prefix.len() {
                    prefix[n - 1]
                } else {
                    period[(n - prefix.len() - 1) % period.len()]
                }
            }
            BasisKind::Rule { rule, head, offset } => {
                if n <= head.len() {
                    head[n - 1]
                } else {
                    rule.raw(offset + (n - head.len()) as u64)
                }
            }
        }
    }

    fn periodicity(&self) -> Option<Periodicity> {
        match &self.kind {
            BasisKind::Constant(d) => Some(Periodicity {
                start: 0,
                period: vec![*d],
            }),
            BasisKind::EventuallyPeriodic { prefix, period } => Some(Periodicity {
                start: prefix.len(),
                period: period.clone(),
            }),
            BasisKind::Rule { .. } => None,
        }
    }

    fn nondecreasing_after(&self) -> usize {
        match &self.kind {
            BasisKind::Rule { head, .. } => head.len(),
            _ => 0,
        }
    }

    fn product(&self, from: usize, to: usize) -> BigUint {
        if from == 1 {
            self.prefix_product(to)
        } else {
            (from..=to).fold(BigUint::one(), |acc, n| acc * self.element(n))
        }
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Basis {}

impl Hash for Basis {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
    }
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Basis").field(&self.kind).finish()
    }
}

fn join(values: &[u64]) -> String {
    values
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BasisKind::Constant(d) => write!(f, "const:{d}"),
            BasisKind::EventuallyPeriodic { prefix, period } if prefix.is_empty() => {
                write!(f, "periodic:{}", join(period))
            }
            BasisKind::EventuallyPeriodic { prefix, period } => {
                write!(f, "prefix:{};periodic:{}", join(prefix), join(period))
            }
            BasisKind::Rule { rule, head, offset } => {
                if !head.is_empty() {
                    write!(f, "prefix:{};", join(head))?;
                }
                write!(f, "{}", rule.name())?;
                if *offset > 0 {
                    write!(f, "+{offset}")?;
                }
                Ok(())
            }
        }
    }
}

fn check_elements(values: &[u64], first_position: usize) -> Result<()> {
    match values.iter().position(|&v| v < 2) {
        Some(i) => Err(Error::ElementTooSmall {
            position: first_position + i,
            value: values[i],
        }),
        None => Ok(()),
    }
}

/// The n-th prime (1-based), from a shared cache.
pub fn nth_prime(n: usize) -> u64 {
    assert!(n >= 1);
    static PRIMES: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    let mut primes = PRIMES
        .get_or_init(|| Mutex::new(vec![2, 3]))
        .lock()
        .unwrap_or_else(|e| e.into_inner());
    let mut candidate = *primes.last().unwrap_or(&3);
    while primes.len() < n {
        candidate += 2;
        let is_prime = primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| candidate % p != 0);
        if is_prime {
            primes.push(candidate);
        }
    }
    primes[n - 1]
}

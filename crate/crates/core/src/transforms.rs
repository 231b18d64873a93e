//! Conversions between the positive, alternating and offset-alternating
//! systems, and the pairwise-compressed basis `p_n = d_{2n-1} d_{2n}`.

use crate::basis::{Basis, Elements, Periodicity};
use crate::digits::{DigitString, Kind, Tail};
use crate::error::{Error, Result};
use crate::rational::{lcm, Rational};
use crate::series::evaluate_exact;

const NEEDS_PERIODIC: &str = "an eventually periodic basis";

/// The basis `p_n = d_{2n-1} d_{2n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedBasis {
    source: Basis,
    compressed: Basis,
}

impl CompressedBasis {
    pub fn new(source: &Basis) -> Result<Self> {
        let p = source
            .periodicity()
            .ok_or(Error::UnsupportedBasis(NEEDS_PERIODIC))?;
        let half_start = p.start.div_ceil(2);
        let half_len = lcm(p.len(), 2) / 2;
        let pair = |n: usize| source.element(2 * n - 1) * source.element(2 * n);
        let compressed = if p.len() == 1 && p.start == 0 {
            Basis::constant(pair(1))?
        } else {
            let prefix = (1..=half_start).map(pair).collect();
            let period = (half_start + 1..=half_start + half_len).map(pair).collect();
            Basis::eventually_periodic(prefix, period)?
        };
        Ok(CompressedBasis {
            source: source.clone(),
            compressed,
        })
    }

    pub fn source(&self) -> &Basis {
        &self.source
    }

    /// The compressed sequence as an ordinary basis.
    pub fn basis(&self) -> &Basis {
        &self.compressed
    }
}

impl Elements for CompressedBasis {
    fn element(&self, n: usize) -> u64 {
        self.compressed.element(n)
    }

    fn periodicity(&self) -> Option<Periodicity> {
        self.compressed.periodicity()
    }
}

/// Prefix and period aligned with the basis: the prefix covers the basis
/// preperiod and has even length, the period length is a multiple of the
/// basis period and of 2.
fn aligned(digits: &DigitString, basis: &Basis) -> Result<(Vec<u64>, Option<Vec<u64>>)> {
    match digits.periodicity() {
        None => Ok((digits.prefix().to_vec(), None)),
        Some((ds, dp)) => {
            let p = basis
                .periodicity()
                .ok_or(Error::UnsupportedBasis(NEEDS_PERIODIC))?;
            let start = ds.max(p.start).next_multiple_of(2);
            let len = lcm(lcm(dp.len(), p.len()), 2);
            let all = digits.first(start + len);
            Ok((all[..start].to_vec(), Some(all[start..].to_vec())))
        }
    }
}

fn rebuild(kind: Kind, prefix: Vec<u64>, period: Option<Vec<u64>>) -> DigitString {
    let tail = match period {
        Some(p) => Tail::Periodic(p),
        None => Tail::Truncated,
    };
    DigitString::raw(kind, prefix, tail).normalized()
}

fn require(digits: &DigitString, kind: Kind) -> Result<()> {
    if digits.kind() == kind {
        Ok(())
    } else {
        Err(Error::UnsupportedKind(digits.kind()))
    }
}

/// Reads NegaD digits under the offset convention; the digits are unchanged.
pub fn negadn_of_negad(digits: &DigitString, basis: &Basis) -> Result<DigitString> {
    require(digits, Kind::NegaD)?;
    digits.revalidate(basis)?;
    Ok(digits.with_kind(Kind::NegaDn))
}

pub fn negad_of_negadn(digits: &DigitString, basis: &Basis) -> Result<DigitString> {
    require(digits, Kind::NegaDn)?;
    digits.revalidate(basis)?;
    Ok(digits.with_kind(Kind::NegaD))
}

/// `NegaDn(e) + NegaD(e) + NegaD(1, 1, 1, ...)`, which is always zero.
pub fn three_term_residue(digits: &DigitString, basis: &Basis) -> Result<Rational> {
    let negad = digits.with_kind(Kind::NegaD);
    let negadn = digits.with_kind(Kind::NegaDn);
    let ones = DigitString::new(Kind::NegaD, Vec::new(), Tail::Periodic(vec![1]), basis)?;
    Ok(evaluate_exact(&negadn, basis)? + evaluate_exact(&negad, basis)? + evaluate_exact(&ones, basis)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// Complements `e_{2n}`; PositiveD and NegaDn values agree.
    Even,
    /// Complements `e_{2n-1}`.
    Odd,
}

/// Replaces `e_k` by `d_k - 1 - e_k` at positions of the given parity and
/// swaps PositiveD with NegaDn.
pub fn parity_complement(digits: &DigitString, basis: &Basis, which: Parity) -> Result<DigitString> {
    let kind = match digits.kind() {
        Kind::PositiveD => Kind::NegaDn,
        Kind::NegaDn => Kind::PositiveD,
        Kind::NegaD => return Err(Error::UnsupportedKind(Kind::NegaD)),
    };
    digits.revalidate(basis)?;
    let (prefix, period) = aligned(digits, basis)?;
    let offset = prefix.len();
    let flip = |n: usize, e: u64| {
        let hit = match which {
            Parity::Even => n % 2 == 0,
            Parity::Odd => n % 2 == 1,
        };
        if hit {
            basis.element(n) - 1 - e
        } else {
            e
        }
    };
    let prefix: Vec<u64> = prefix.iter().enumerate().map(|(i, &e)| flip(i + 1, e)).collect();
    let period = period.map(|p| {
        p.iter()
            .enumerate()
            .map(|(i, &e)| flip(offset + i + 1, e))
            .collect()
    });
    Ok(rebuild(kind, prefix, period))
}

/// Merges digit pairs into one digit over the compressed basis:
/// `b_n = a_{2n-1} d_{2n} + a_{2n}` for PositiveD input and
/// `g_n = (a_{2n-1} + 1) d_{2n} - a_{2n} - 1` for NegaDn input.
/// The result is a PositiveD string with the same value.
pub fn pair_compress(digits: &DigitString, basis: &Basis) -> Result<(DigitString, CompressedBasis)> {
    let kind = digits.kind();
    if kind == Kind::NegaD {
        return Err(Error::UnsupportedKind(kind));
    }
    if digits.is_truncated() {
        return Err(Error::TruncatedTail);
    }
    digits.revalidate(basis)?;
    let compressed = CompressedBasis::new(basis)?;
    let (prefix, period) = aligned(digits, basis)?;
    let period = period.expect("tail is known");
    let merge = |start: usize, block: &[u64]| -> Vec<u64> {
        block
            .chunks(2)
            .enumerate()
            .map(|(i, pair)| {
                let d = basis.element(start + 2 * i + 2);
                match kind {
                    Kind::PositiveD => pair[0] * d + pair[1],
                    _ => (pair[0] + 1) * d - pair[1] - 1,
                }
            })
            .collect()
    };
    let new_prefix = merge(0, &prefix);
    let new_period = merge(prefix.len(), &period);
    let out = rebuild(Kind::PositiveD, new_prefix, Some(new_period));
    debug_assert!(out.revalidate(&compressed).is_ok());
    Ok((out, compressed))
}

/// Inverse of [`pair_compress`], splitting each digit back into a pair read
/// under `kind`.
pub fn pair_expand(digits: &DigitString, compressed: &CompressedBasis, kind: Kind) -> Result<DigitString> {
    require(digits, Kind::PositiveD)?;
    if kind == Kind::NegaD {
        return Err(Error::UnsupportedKind(kind));
    }
    digits.revalidate(compressed)?;
    let (prefix, period) = aligned(digits, compressed.basis())?;
    let source = compressed.source();
    let split = |start: usize, block: &[u64]| -> Vec<u64> {
        block
            .iter()
            .enumerate()
            .flat_map(|(i, &b)| {
                let d = source.element(2 * (start + i + 1));
                match kind {
                    Kind::PositiveD => [b / d, b % d],
                    _ => {
                        let hi = (b + 1).div_ceil(d);
                        [hi - 1, hi * d - b - 1]
                    }
                }
            })
            .collect()
    };
    let new_prefix = split(0, &prefix);
    let new_period = period.map(|p| split(prefix.len(), &p));
    Ok(rebuild(kind, new_prefix, new_period))
}

/// `(e_1, 0, e_3, 0, ...)` and `(0, e_2, 0, e_4, ...)`, same kind and tail type.
pub fn parity_split(digits: &DigitString) -> (DigitString, DigitString) {
    let mask = |keep_odd: bool| {
        let u = digits.unroll(digits.prefix().len().next_multiple_of(2), 2);
        let m = |n: usize, e: u64| if (n % 2 == 1) == keep_odd { e } else { 0 };
        let prefix: Vec<u64> = u.prefix().iter().enumerate().map(|(i, &e)| m(i + 1, e)).collect();
        let start = prefix.len();
        let tail = match u.tail() {
            Tail::Periodic(p) => Tail::Periodic(
                p.iter().enumerate().map(|(i, &e)| m(start + i + 1, e)).collect(),
            ),
            other => other.clone(),
        };
        DigitString::raw(digits.kind(), prefix, tail).normalized()
    };
    (mask(true), mask(false))
}

/// `(e_2, e_4, ...)` as a PositiveD string over the compressed basis.
pub fn even_subsequence(digits: &DigitString, basis: &Basis) -> Result<DigitString> {
    if digits.is_truncated() {
        return Err(Error::TruncatedTail);
    }
    let (prefix, period) = aligned(digits, basis)?;
    let evens = |block: &[u64]| block.chunks(2).map(|pair| pair[1]).collect::<Vec<_>>();
    Ok(rebuild(
        Kind::PositiveD,
        evens(&prefix),
        period.map(|p| evens(&p)),
    ))
}

/// `(d_2 - 1, d_4 - 1, ...)` as a PositiveD string over the compressed basis.
pub fn even_maxima(basis: &Basis) -> Result<DigitString> {
    let p = basis
        .periodicity()
        .ok_or(Error::UnsupportedBasis(NEEDS_PERIODIC))?;
    let start = p.start.next_multiple_of(2);
    let len = lcm(p.len(), 2);
    let top = |n: usize| basis.element(2 * n) - 1;
    Ok(rebuild(
        Kind::PositiveD,
        (1..=start / 2).map(top).collect(),
        Some((start / 2 + 1..=(start + len) / 2).map(top).collect()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use num_traits::Zero;

    fn c2() -> Basis {
        Basis::constant(2).unwrap()
    }

    fn s(kind: Kind, prefix: Vec<u64>, tail: Tail, b: &Basis) -> DigitString {
        DigitString::new(kind, prefix, tail, b).unwrap()
    }

    #[test]
    fn compressed_elements() {
        let b = Basis::eventually_periodic(vec![5], vec![2, 3]).unwrap();
        let cb = CompressedBasis::new(&b).unwrap();
        for n in 1..=10 {
            assert_eq!(cb.element(n), b.element(2 * n - 1) * b.element(2 * n));
            assert_eq!(cb.basis().prefix_product(n), b.prefix_product(2 * n));
        }
        assert_eq!(
            CompressedBasis::new(&Basis::rule(crate::Rule::Even)),
            Err(Error::UnsupportedBasis(NEEDS_PERIODIC))
        );
    }

    #[test]
    fn three_term_examples() {
        let b = c2();
        let zeros = DigitString::zeros(Kind::NegaD);
        assert_eq!(
            evaluate_exact(&negadn_of_negad(&zeros, &b).unwrap(), &b).unwrap(),
            ratio(1, 3)
        );
        assert!(three_term_residue(&zeros, &b).unwrap().is_zero());
        let ones = s(Kind::NegaD, vec![], Tail::Periodic(vec![1]), &b);
        assert_eq!(
            evaluate_exact(&negadn_of_negad(&ones, &b).unwrap(), &b).unwrap(),
            ratio(2, 3)
        );
        assert!(three_term_residue(&ones, &b).unwrap().is_zero());
        let back = negad_of_negadn(&negadn_of_negad(&ones, &b).unwrap(), &b).unwrap();
        assert_eq!(back, ones);
    }

    #[test]
    fn even_complement_examples() {
        let b = c2();
        let ones = s(Kind::PositiveD, vec![], Tail::Periodic(vec![1]), &b);
        let out = parity_complement(&ones, &b, Parity::Even).unwrap();
        assert_eq!(out, s(Kind::NegaDn, vec![], Tail::Periodic(vec![1, 0]), &b));
        assert_eq!(evaluate_exact(&out, &b).unwrap(), int(1));

        let zeros = DigitString::zeros(Kind::PositiveD);
        let out = parity_complement(&zeros, &b, Parity::Even).unwrap();
        assert_eq!(out, s(Kind::NegaDn, vec![], Tail::Periodic(vec![0, 1]), &b));
        assert!(evaluate_exact(&out, &b).unwrap().is_zero());

        for which in [Parity::Even, Parity::Odd] {
            let twice = parity_complement(&parity_complement(&ones, &b, which).unwrap(), &b, which).unwrap();
            assert!(twice.same_sequence(&ones));
            assert_eq!(twice.kind(), Kind::PositiveD);
        }
        assert_eq!(
            parity_complement(&ones.with_kind(Kind::NegaD), &b, Parity::Even),
            Err(Error::UnsupportedKind(Kind::NegaD))
        );
    }

    #[test]
    fn pair_compress_examples() {
        let b = c2();
        let x = s(Kind::PositiveD, vec![], Tail::Periodic(vec![1, 0]), &b);
        let (y, cb) = pair_compress(&x, &b).unwrap();
        assert_eq!(y, s(Kind::PositiveD, vec![], Tail::Periodic(vec![2]), cb.basis()));
        assert_eq!(evaluate_exact(&y, cb.basis()).unwrap(), ratio(2, 3));

        let z = DigitString::zeros(Kind::NegaDn);
        let (g, cb) = pair_compress(&z, &b).unwrap();
        assert_eq!(g, s(Kind::PositiveD, vec![], Tail::Periodic(vec![1]), cb.basis()));
        assert_eq!(evaluate_exact(&g, cb.basis()).unwrap(), ratio(1, 3));
    }

    #[test]
    fn pair_roundtrip_odd_prefix() {
        let b = Basis::eventually_periodic(vec![5], vec![2, 3]).unwrap();
        for kind in [Kind::PositiveD, Kind::NegaDn] {
            let x = s(kind, vec![4, 1, 2], Tail::Periodic(vec![1, 0, 1]), &b);
            let (y, cb) = pair_compress(&x, &b).unwrap();
            assert_eq!(
                evaluate_exact(&y, cb.basis()).unwrap(),
                evaluate_exact(&x, &b).unwrap()
            );
            let back = pair_expand(&y, &cb, kind).unwrap();
            assert!(back.same_sequence(&x), "{kind:?}");
        }
    }

    #[test]
    fn split_examples() {
        let b = c2();
        let ones = s(Kind::NegaD, vec![], Tail::Periodic(vec![1]), &b);
        let (odd, even) = parity_split(&ones);
        assert!(odd.same_sequence(&s(Kind::NegaD, vec![], Tail::Periodic(vec![1, 0]), &b)));
        assert!(even.same_sequence(&s(Kind::NegaD, vec![], Tail::Periodic(vec![0, 1]), &b)));
        let (a, z) = parity_split(&DigitString::zeros(Kind::NegaD));
        assert_eq!(a, DigitString::zeros(Kind::NegaD));
        assert_eq!(z, DigitString::zeros(Kind::NegaD));
        // positive minus alternating is twice the odd-position positive sum
        let lhs = evaluate_exact(&ones.with_kind(Kind::PositiveD), &b).unwrap()
            - evaluate_exact(&ones, &b).unwrap();
        assert_eq!(lhs, ratio(4, 3));
        assert_eq!(
            evaluate_exact(&odd.with_kind(Kind::PositiveD), &b).unwrap() * int(2),
            ratio(4, 3)
        );
    }

    #[test]
    fn compressed_identity_instance() {
        let b = Basis::periodic(vec![2, 3, 4]).unwrap();
        let e = s(Kind::PositiveD, vec![1], Tail::Periodic(vec![0, 2, 1]), &b);
        let cb = CompressedBasis::new(&b).unwrap();
        let lhs = evaluate_exact(&e, &b).unwrap() - evaluate_exact(&e.with_kind(Kind::NegaDn), &b).unwrap();
        let evens = evaluate_exact(&even_subsequence(&e, &b).unwrap(), cb.basis()).unwrap();
        let tops = evaluate_exact(&even_maxima(&b).unwrap(), cb.basis()).unwrap();
        assert_eq!(lhs, evens * int(2) - tops);
    }
}

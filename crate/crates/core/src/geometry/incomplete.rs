use num_bigint::BigInt;
use num_traits::Zero;

use super::cylinder::CylinderBase;
use super::EnumOptions;
use crate::basis::{Basis, BasisKind, Elements};
use crate::digits::{DigitString, Kind, Tail};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::par::{map_range, mixed_radix, product_size};
use crate::rational::{from_big, ratio, recip, Rational};
use crate::series::{domain, evaluate_exact, prefix_value};
use crate::transforms::parity_split;

/// The series `s_0 = sum (-1)^n e_n / (d_1 ... d_n)` whose subsums form
/// `M_{s_0}`; position `n` allows the digits `{0, e_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncompleteSumSpec {
    s0: DigitString,
    basis: Basis,
}

impl IncompleteSumSpec {
    pub fn new(s0: DigitString, basis: Basis) -> Result<Self> {
        if s0.is_truncated() {
            return Err(Error::TruncatedTail);
        }
        s0.revalidate(&basis)?;
        Ok(IncompleteSumSpec {
            s0: s0.with_kind(Kind::NegaD),
            basis,
        })
    }

    pub fn s0(&self) -> &DigitString {
        &self.s0
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn epsilon(&self, n: usize) -> u64 {
        self.s0.digit(n).unwrap_or(0)
    }

    /// Exact contributions of the negative (odd) and positive (even)
    /// positions beyond `n`.
    fn tail_parts(&self, n: usize) -> Result<(Rational, Rational)> {
        let u = self.s0.unroll(n, 1);
        let mut prefix = u.prefix().to_vec();
        prefix[..n].iter_mut().for_each(|c| *c = 0);
        let rest = DigitString::raw(Kind::NegaD, prefix, u.tail().clone());
        let (odd, even) = parity_split(&rest);
        Ok((
            evaluate_exact(&odd, &self.basis)?,
            evaluate_exact(&even, &self.basis)?,
        ))
    }

    /// `sum_{k>n} e_k / (d_1 ... d_k)`, the common length of rank-`n` intervals.
    pub fn interval_length(&self, n: usize) -> Result<Rational> {
        let (neg, pos) = self.tail_parts(n)?;
        Ok(pos - neg)
    }

    fn check_selection(&self, selection: &[u64]) -> Result<()> {
        for (i, &c) in selection.iter().enumerate() {
            let e = self.epsilon(i + 1);
            if c != 0 && c != e {
                return Err(Error::InvalidSelection {
                    position: i + 1,
                    digit: c,
                    allowed: e,
                });
            }
        }
        Ok(())
    }

    fn radices(&self, depth: usize) -> Vec<u64> {
        (1..=depth)
            .map(|n| if self.epsilon(n) == 0 { 1 } else { 2 })
            .collect()
    }
}

/// Closed interval spanned by the subsums starting with `selection`: the
/// infimum keeps only the odd positions beyond it, the supremum only the even.
pub fn ms0_cylinder(spec: &IncompleteSumSpec, selection: &[u64]) -> Result<Interval> {
    spec.check_selection(selection)?;
    let (neg, pos) = spec.tail_parts(selection.len())?;
    let g = selection_value(selection, &spec.basis);
    Ok(Interval::new(&g + neg, g + pos))
}

fn selection_value(selection: &[u64], basis: &Basis) -> Rational {
    let s = DigitString::raw(Kind::NegaD, selection.to_vec(), Tail::Zeros);
    prefix_value(&s, selection.len(), basis)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    pub level: usize,
    /// Number of sibling pairs at this level; all share the same gap.
    pub pairs: u64,
    pub width: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ms0Cover {
    pub depth: usize,
    /// Selections with their intervals, in lexicographic selection order.
    pub intervals: Vec<(CylinderBase, Interval)>,
    pub total_length: Rational,
    pub gaps: Vec<Gap>,
}

/// Every rank-`depth` interval, their total length and the sibling gaps at
/// each level.
pub fn ms0_cover(spec: &IncompleteSumSpec, depth: usize, opts: EnumOptions) -> Result<Ms0Cover> {
    let radices = spec.radices(depth);
    let count = opts.check(product_size(&radices))?;
    let (neg, pos) = spec.tail_parts(depth)?;
    let denom = spec.basis.prefix_product(depth);
    let steps: Vec<(BigInt, u64)> = (1..=depth)
        .map(|n| {
            // weight of digit n over d_1 ... d_depth
            let w = spec.basis.product(n + 1, depth);
            let signed = if n % 2 == 0 {
                BigInt::from(w)
            } else {
                -BigInt::from(w)
            };
            (signed, spec.epsilon(n))
        })
        .collect();
    let intervals = map_range(opts.exec, count, |i| {
        let bits = mixed_radix(i, &radices);
        let mut num = BigInt::zero();
        let digits: Vec<u64> = bits
            .iter()
            .zip(&steps)
            .map(|(&b, (w, e))| {
                if b == 1 {
                    num += w * BigInt::from(*e);
                    *e
                } else {
                    0
                }
            })
            .collect();
        let g = from_big(num, &denom);
        let iv = Interval::new(&g + &neg, g + &pos);
        (CylinderBase::raw(digits), iv)
    });
    let total_length = Rational::from_integer(BigInt::from(count)) * (&pos - &neg);
    let mut gaps = Vec::new();
    let mut pairs = 1u64;
    for level in 1..=depth {
        if spec.epsilon(level) != 0 {
            gaps.push(Gap {
                level,
                pairs,
                width: ms0_gap(spec, &vec![0; level - 1])?,
            });
            pairs *= 2;
        }
    }
    Ok(Ms0Cover {
        depth,
        intervals,
        total_length,
        gaps,
    })
}

/// `2^(nonzero digits among the first n) * sum_{k>n} e_k / (d_1 ... d_k)`.
pub fn ms0_total_length(spec: &IncompleteSumSpec, n: usize) -> Result<Rational> {
    let count = spec.radices(n).iter().filter(|&&r| r == 2).count();
    let scale = Rational::from_integer(BigInt::from(2u32).pow(count as u32));
    Ok(scale * spec.interval_length(n)?)
}

/// Distance between the two children of `parent` at the next level, measured
/// from their endpoints. Even levels place the `0` child left of the `e` child,
/// odd levels place it right.
pub fn ms0_gap(spec: &IncompleteSumSpec, parent: &[u64]) -> Result<Rational> {
    let level = parent.len() + 1;
    let e = spec.epsilon(level);
    let mut zero = parent.to_vec();
    zero.push(0);
    let mut full = parent.to_vec();
    full.push(e);
    let a = ms0_cylinder(spec, &zero)?;
    let b = ms0_cylinder(spec, &full)?;
    Ok(if level % 2 == 0 {
        b.lo() - a.hi()
    } else {
        a.lo() - b.hi()
    })
}

/// `(e_n - sum_{k>=1} e_{n+k} / (d_{n+1} ... d_{n+k})) / (d_1 ... d_n)`.
pub fn gap_formula(spec: &IncompleteSumSpec, n: usize) -> Result<Rational> {
    let head = ratio(spec.epsilon(n) as i64, 1) * recip(&spec.basis.prefix_product(n));
    Ok(head - spec.interval_length(n)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverStats {
    pub depth: usize,
    pub intervals: u64,
    pub total_length: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ms0Class {
    /// `{0}`.
    Singleton,
    /// Finitely many nonzero digits; at most `2^nonzero` points.
    FiniteSet { nonzero: usize },
    /// `d_n = 2` and `e_n = 1` everywhere: the whole domain.
    FullSegment(Interval),
    /// Finitely many `d_n != 2` and all digits `1` after the last of them.
    FiniteUnionOfSegments,
    /// `d_n > 2` infinitely often with infinitely many nonzero digits.
    CantorNull,
    /// None of the above; cover statistics at a fixed depth.
    UnclassifiedEmpirical(CoverStats),
}

impl Ms0Class {
    pub fn name(&self) -> &'static str {
        match self {
            Ms0Class::Singleton => "singleton",
            Ms0Class::FiniteSet { .. } => "finite_set",
            Ms0Class::FullSegment(_) => "full_segment",
            Ms0Class::FiniteUnionOfSegments => "finite_union_of_segments",
            Ms0Class::CantorNull => "cantor_null",
            Ms0Class::UnclassifiedEmpirical(_) => "unclassified",
        }
    }
}

const EMPIRICAL_DEPTH: usize = 12;

pub fn ms0_classify(spec: &IncompleteSumSpec) -> Result<Ms0Class> {
    let s0 = &spec.s0;
    let basis = &spec.basis;
    if let Some(nonzero) = s0.nonzero_count() {
        return Ok(if nonzero == 0 {
            Ms0Class::Singleton
        } else {
            Ms0Class::FiniteSet { nonzero }
        });
    }
    let (ds, dp) = s0.periodicity().ok_or(Error::TruncatedTail)?;
    let ones_after = |m: usize| {
        let end = m.max(ds) + dp.len();
        (m + 1..=end).all(|n| s0.digit(n) == Some(1))
    };
    match basis.kind() {
        BasisKind::Rule { .. } => return Ok(Ms0Class::CantorNull),
        _ => {
            let p = basis.periodicity().expect("periodic basis");
            if p.period.iter().any(|&d| d > 2) {
                return Ok(Ms0Class::CantorNull);
            }
            match (1..=p.start).rev().find(|&n| basis.element(n) != 2) {
                None if ones_after(0) => return Ok(Ms0Class::FullSegment(domain(basis))),
                Some(m) if ones_after(m) => return Ok(Ms0Class::FiniteUnionOfSegments),
                _ => {}
            }
        }
    }
    let cover = ms0_cover(spec, EMPIRICAL_DEPTH, EnumOptions::default())?;
    Ok(Ms0Class::UnclassifiedEmpirical(CoverStats {
        depth: EMPIRICAL_DEPTH,
        intervals: cover.intervals.len() as u64,
        total_length: cover.total_length,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn spec(prefix: Vec<u64>, tail: Tail, basis: Basis) -> IncompleteSumSpec {
        let s0 = DigitString::negad(prefix, tail, &basis).unwrap();
        IncompleteSumSpec::new(s0, basis).unwrap()
    }

    #[test]
    fn cylinder_examples() {
        let s = spec(vec![], Tail::Periodic(vec![1]), Basis::constant(2).unwrap());
        assert_eq!(
            ms0_cylinder(&s, &[]).unwrap(),
            Interval::new(ratio(-2, 3), ratio(1, 3))
        );
        let s3 = spec(vec![], Tail::Periodic(vec![1]), Basis::constant(3).unwrap());
        let top = ms0_cylinder(&s3, &[]).unwrap();
        assert_eq!(top, Interval::new(ratio(-3, 8), ratio(1, 8)));
        assert_eq!(top.width(), ratio(1, 2));
        let fin = spec(vec![1, 0, 2], Tail::Zeros, Basis::constant(3).unwrap());
        assert!(ms0_cylinder(&fin, &[1, 0, 2]).unwrap().is_point());
        assert_eq!(
            ms0_cylinder(&fin, &[2]),
            Err(Error::InvalidSelection {
                position: 1,
                digit: 2,
                allowed: 1
            })
        );
    }

    #[test]
    fn cover_examples() {
        let s = spec(vec![], Tail::Periodic(vec![1]), Basis::constant(2).unwrap());
        let cover = ms0_cover(&s, 3, EnumOptions::default()).unwrap();
        assert_eq!(cover.total_length, int(1));
        assert!(cover.gaps.iter().all(|g| g.width.is_zero()));

        let s3 = spec(vec![], Tail::Periodic(vec![1]), Basis::constant(3).unwrap());
        for n in 1..=6 {
            let cover = ms0_cover(&s3, n, EnumOptions::default()).unwrap();
            assert_eq!(cover.intervals.len(), 1 << n);
            let expected = Rational::new(BigInt::from(1u64 << n), BigInt::from(2 * 3u64.pow(n as u32)));
            assert_eq!(cover.total_length, expected);
            assert_eq!(ms0_total_length(&s3, n).unwrap(), expected);
        }

        let fin = spec(vec![1], Tail::Zeros, Basis::constant(3).unwrap());
        let cover = ms0_cover(&fin, 4, EnumOptions::default()).unwrap();
        assert_eq!(cover.intervals.len(), 2);
        assert!(cover.total_length.is_zero());
    }

    #[test]
    fn gaps_match_formula() {
        let s = spec(
            vec![2, 1],
            Tail::Periodic(vec![3, 0, 1]),
            Basis::eventually_periodic(vec![3], vec![2, 4, 3]).unwrap(),
        );
        for n in 1..=8 {
            if s.epsilon(n) != 0 {
                let measured = ms0_gap(&s, &vec![0; n - 1]).unwrap();
                assert_eq!(measured, gap_formula(&s, n).unwrap());
                assert!(measured >= Rational::zero());
            }
        }
    }

    #[test]
    fn classification() {
        let c2 = Basis::constant(2).unwrap();
        let c3 = Basis::constant(3).unwrap();
        assert_eq!(
            ms0_classify(&spec(vec![], Tail::Zeros, c3.clone())).unwrap(),
            Ms0Class::Singleton
        );
        assert_eq!(
            ms0_classify(&spec(vec![1, 0, 1], Tail::Zeros, c3.clone())).unwrap(),
            Ms0Class::FiniteSet { nonzero: 2 }
        );
        assert_eq!(
            ms0_classify(&spec(vec![], Tail::Periodic(vec![1]), c2.clone())).unwrap(),
            Ms0Class::FullSegment(Interval::new(ratio(-2, 3), ratio(1, 3)))
        );
        let mixed = Basis::eventually_periodic(vec![3, 5], vec![2]).unwrap();
        assert_eq!(
            ms0_classify(&spec(vec![2, 0], Tail::Periodic(vec![1]), mixed)).unwrap(),
            Ms0Class::FiniteUnionOfSegments
        );
        assert_eq!(
            ms0_classify(&spec(vec![], Tail::Periodic(vec![1]), c3)).unwrap(),
            Ms0Class::CantorNull
        );
        assert!(matches!(
            ms0_classify(&spec(vec![], Tail::Periodic(vec![1, 0]), c2)).unwrap(),
            Ms0Class::UnclassifiedEmpirical(_)
        ));
    }
}

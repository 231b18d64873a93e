use num_traits::One;

use super::cylinder::CylinderBase;
use super::EnumOptions;
use crate::basis::{Basis, Elements};
use crate::error::{Error, Result};
use crate::par::{map_range, mixed_radix, product_size};
use crate::rational::{ratio, recip, Rational};

/// Digits fixed at positions `k_1 < k_2 < ... < k_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionConstraint {
    entries: Vec<(usize, u64)>,
}

impl PositionConstraint {
    pub fn new(entries: Vec<(usize, u64)>, basis: &Basis) -> Result<Self> {
        let mut last = 0;
        for &(k, c) in &entries {
            if k <= last {
                return Err(Error::InvalidArgument(format!(
                    "positions must be increasing and start at 1, got {k} after {last}"
                )));
            }
            let element = basis.element(k);
            if c >= element {
                return Err(Error::DigitOutOfRange {
                    position: k,
                    digit: c,
                    element,
                });
            }
            last = k;
        }
        Ok(PositionConstraint { entries })
    }

    pub fn entries(&self) -> &[(usize, u64)] {
        &self.entries
    }

    pub fn max_position(&self) -> usize {
        self.entries.last().map_or(0, |&(k, _)| k)
    }

    pub fn fixed(&self, n: usize) -> Option<u64> {
        self.entries.iter().find(|&&(k, _)| k == n).map(|&(_, c)| c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionStats {
    pub measure: Rational,
    pub diameter: Rational,
}

/// Measure `prod 1/d_{k_i}` and diameter `1 - sum (d_{k_i} - 1)/(d_1 ... d_{k_i})`.
pub fn position_set_stats(constraint: &PositionConstraint, basis: &Basis) -> Result<PositionStats> {
    let constraint = PositionConstraint::new(constraint.entries.clone(), basis)?;
    let mut measure = Rational::one();
    let mut diameter = Rational::one();
    for &(k, _) in constraint.entries() {
        let d = basis.element(k);
        measure /= ratio(d as i64, 1);
        diameter -= ratio(d as i64 - 1, 1) * recip(&basis.prefix_product(k));
    }
    Ok(PositionStats { measure, diameter })
}

/// All rank-`rank` bases obeying the constraint, in lexicographic order.
pub fn position_set_cover(
    constraint: &PositionConstraint,
    basis: &Basis,
    rank: usize,
    opts: EnumOptions,
) -> Result<Vec<CylinderBase>> {
    if rank < constraint.max_position() {
        return Err(Error::InvalidArgument(format!(
            "rank {rank} is below the last constrained position {}",
            constraint.max_position()
        )));
    }
    let radices: Vec<u64> = (1..=rank)
        .map(|n| match constraint.fixed(n) {
            Some(_) => 1,
            None => basis.element(n),
        })
        .collect();
    let count = opts.check(product_size(&radices))?;
    Ok(map_range(opts.exec, count, |i| {
        let mut digits = mixed_radix(i, &radices);
        for &(k, c) in constraint.entries() {
            digits[k - 1] = c;
        }
        CylinderBase::raw(digits)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cylinder::{cylinder, cylinder_length};
    use num_traits::Zero;

    #[test]
    fn stats_examples() {
        let b = Basis::periodic(vec![2, 3]).unwrap();
        let single = |c| PositionConstraint::new(vec![(2, c)], &b).unwrap();
        assert_eq!(position_set_stats(&single(0), &b).unwrap().measure, ratio(1, 3));
        assert_eq!(position_set_stats(&single(1), &b).unwrap().diameter, ratio(2, 3));
        let c2 = Basis::constant(2).unwrap();
        let pair = PositionConstraint::new(vec![(1, 0), (3, 0)], &c2).unwrap();
        assert_eq!(position_set_stats(&pair, &c2).unwrap().measure, ratio(1, 4));
    }

    #[test]
    fn cover_examples() {
        let b = Basis::constant(2).unwrap();
        let k2 = PositionConstraint::new(vec![(2, 1)], &b).unwrap();
        let cover = position_set_cover(&k2, &b, 2, EnumOptions::default()).unwrap();
        let digits: Vec<_> = cover.iter().map(|c| c.digits().to_vec()).collect();
        assert_eq!(digits, vec![vec![0, 1], vec![1, 1]]);
        let total: Rational = cover
            .iter()
            .map(|c| cylinder(c, &b).unwrap().width())
            .fold(Rational::zero(), |a, w| a + w);
        assert_eq!(total, ratio(1, 2));
        assert_eq!(cylinder_length(2, &b), ratio(1, 4));

        let k1 = PositionConstraint::new(vec![(1, 0)], &b).unwrap();
        let cover = position_set_cover(&k1, &b, 1, EnumOptions::default()).unwrap();
        assert_eq!(cover.len(), 1);
        assert_eq!(cover[0].digits(), &[0]);
    }

    #[test]
    fn cover_respects_limit() {
        let b = Basis::constant(10).unwrap();
        let c = PositionConstraint::new(vec![(1, 3)], &b).unwrap();
        let opts = EnumOptions {
            limit: 1000,
            ..EnumOptions::default()
        };
        assert!(position_set_cover(&c, &b, 4, opts).is_ok());
        assert_eq!(
            position_set_cover(&c, &b, 5, opts),
            Err(Error::CombinatorialLimit {
                count: 10_000,
                limit: 1000
            })
        );
    }
}

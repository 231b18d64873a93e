use crate::basis::{Basis, Elements};
use crate::codec::{cylinder_of, encode};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{recip, Rational};

/// Digits `c_1 .. c_m` fixing the first `m` positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CylinderBase {
    digits: Vec<u64>,
}

impl CylinderBase {
    pub fn new(digits: Vec<u64>, basis: &Basis) -> Result<Self> {
        for (i, &c) in digits.iter().enumerate() {
            let element = basis.element(i + 1);
            if c >= element {
                return Err(Error::DigitOutOfRange {
                    position: i + 1,
                    digit: c,
                    element,
                });
            }
        }
        Ok(CylinderBase { digits })
    }

    pub(crate) fn raw(digits: Vec<u64>) -> Self {
        CylinderBase { digits }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn rank(&self) -> usize {
        self.digits.len()
    }

    /// Base with one more digit.
    pub fn child(&self, c: u64) -> CylinderBase {
        let mut digits = self.digits.clone();
        digits.push(c);
        CylinderBase { digits }
    }
}

/// The closed interval of all numbers whose first `m` digits are the base.
pub fn cylinder(base: &CylinderBase, basis: &Basis) -> Result<Interval> {
    CylinderBase::new(base.digits.clone(), basis)?;
    cylinder_of(&base.digits, basis)
}

/// `1 / (d_1 ... d_m)`.
pub fn cylinder_length(rank: usize, basis: &Basis) -> Rational {
    recip(&basis.prefix_product(rank))
}

/// Rank-`m` base of the canonical expansion of `x`.
pub fn locate(x: &Rational, basis: &Basis, m: usize) -> Result<CylinderBase> {
    let r = encode(x, basis, m)?;
    Ok(CylinderBase::raw(r.digits.first(m)))
}

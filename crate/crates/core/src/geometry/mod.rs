//! Cylinder intervals, digit-position sets, incomplete sums and covering
//! dimension estimates.

mod cylinder;
mod dimension;
mod incomplete;
mod position;

pub use cylinder::{cylinder, cylinder_length, locate, CylinderBase};
pub use dimension::{dimension_estimate, default_grid, CoverTarget, CoveringSum, DimensionEstimate};
pub use incomplete::{
    gap_formula, ms0_classify, ms0_cover, ms0_cylinder, ms0_gap, ms0_total_length, CoverStats,
    Gap, IncompleteSumSpec, Ms0Class, Ms0Cover,
};
pub use position::{position_set_cover, position_set_stats, PositionConstraint, PositionStats};

use crate::par::Execution;

/// Bound on enumerated items, `2^22` by default.
pub const DEFAULT_LIMIT: u64 = 1 << 22;

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub limit: u64,
    pub exec: Execution,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            limit: DEFAULT_LIMIT,
            exec: Execution::default(),
        }
    }
}

impl EnumOptions {
    pub fn with_exec(exec: Execution) -> Self {
        EnumOptions {
            exec,
            ..Self::default()
        }
    }

    pub(crate) fn check(&self, count: Option<u128>) -> crate::Result<u64> {
        match count {
            Some(c) if c <= self.limit as u128 => Ok(c as u64),
            other => Err(crate::Error::CombinatorialLimit {
                count: other.unwrap_or(u128::MAX),
                limit: self.limit,
            }),
        }
    }
}

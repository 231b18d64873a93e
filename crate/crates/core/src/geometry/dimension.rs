use super::incomplete::IncompleteSumSpec;
use super::position::PositionConstraint;
use super::EnumOptions;
use crate::basis::{Basis, Elements};
use crate::error::{Error, Result};

/// Sets whose rank-`n` cylinder covers are counted in closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverTarget {
    PositionFamily(PositionConstraint),
    IncompleteSum(IncompleteSumSpec),
    /// Numbers whose every digit lies in the alphabet.
    DigitAlphabet(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringSum {
    pub alpha: f64,
    pub log_sum: f64,
    pub sum: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub depth: usize,
    pub cylinders: u64,
    pub estimate: f64,
    pub covering_sums: Vec<CoveringSum>,
    pub faithful_gate: bool,
    /// Upper bound on `d_k d_(k+1)`, the square of the largest element.
    pub comparison_constant: u128,
}

/// `0, 0.05, ..., 1`.
pub fn default_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

const TOLERANCE: f64 = 1e-3;

fn branching(target: &CoverTarget, basis: &Basis, depth: usize) -> Result<Vec<u64>> {
    (1..=depth)
        .map(|n| {
            let d = basis.element(n);
            let c = match target {
                CoverTarget::PositionFamily(pc) => match pc.fixed(n) {
                    Some(_) => 1,
                    None => d,
                },
                CoverTarget::IncompleteSum(spec) => {
                    if spec.epsilon(n) == 0 {
                        1
                    } else {
                        2
                    }
                }
                CoverTarget::DigitAlphabet(v) => {
                    let mut seen: Vec<u64> = v.iter().copied().filter(|&c| c < d).collect();
                    seen.sort_unstable();
                    seen.dedup();
                    seen.len() as u64
                }
            };
            if c == 0 {
                return Err(Error::InvalidArgument(format!(
                    "alphabet has no digit below d_{n} = {d}"
                )));
            }
            Ok(c)
        })
        .collect()
}

/// Covering sums `N_n * (d_1 ... d_n)^(-alpha)` over the grid and the alpha
/// at which the sum crosses 1.
pub fn dimension_estimate(
    target: &CoverTarget,
    basis: &Basis,
    depth: usize,
    grid: &[f64],
    opts: EnumOptions,
) -> Result<DimensionEstimate> {
    let max = basis.max_element().ok_or(Error::GateFailed)?;
    if let CoverTarget::PositionFamily(pc) = target {
        if depth < pc.max_position() {
            return Err(Error::InvalidArgument(format!(
                "depth {depth} is below the last constrained position {}",
                pc.max_position()
            )));
        }
    }
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("alpha grid must be nonempty and increasing".into()));
    }
    let counts = branching(target, basis, depth)?;
    let cylinders = opts.check(crate::par::product_size(&counts))?;
    let log_count: f64 = counts.iter().map(|&c| (c as f64).ln()).sum();
    let log_scale: f64 = (1..=depth).map(|n| (basis.element(n) as f64).ln()).sum();
    let log_sum = |a: f64| log_count - a * log_scale;

    let covering_sums: Vec<CoveringSum> = grid
        .iter()
        .map(|&alpha| {
            let l = log_sum(alpha);
            CoveringSum {
                alpha,
                log_sum: l,
                sum: l.exp(),
            }
        })
        .collect();

    let estimate = if let Some(exact) = covering_sums.iter().find(|c| c.log_sum == 0.0) {
        exact.alpha
    } else if let Some(w) = covering_sums
        .windows(2)
        .find(|w| w[0].log_sum > 0.0 && w[1].log_sum < 0.0)
    {
        let (mut lo, mut hi) = (w[0].alpha, w[1].alpha);
        while hi - lo > TOLERANCE {
            let mid = 0.5 * (lo + hi);
            if log_sum(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    } else if covering_sums[0].log_sum < 0.0 {
        grid[0]
    } else {
        grid[grid.len() - 1]
    };

    Ok(DimensionEstimate {
        depth,
        cylinders,
        estimate,
        covering_sums,
        faithful_gate: true,
        comparison_constant: (max as u128) * (max as u128),
    })
}

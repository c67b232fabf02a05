use serde::Serialize;

use crate::algebra::WeightVector;
use crate::error::{PfmsError, Result};
use crate::grade::Channel;
use crate::multiset::PictureFuzzyMultiset;
use crate::TOL_CMP;

/// Outcome of the finite-point criterion at one level.
///
/// Slacks are `lhs − rhs` for σ and τ and `rhs − lhs` for η, so a negative
/// slack is a violation in every channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JensenReport {
    pub point: f64,
    pub slacks: [f64; 3],
    pub holds: bool,
}

impl JensenReport {
    pub fn slack(&self, channel: Channel) -> f64 {
        self.slacks[channel.index()]
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Compares the grade at `Σλᵢrᵢ` with the worst grade among the `rᵢ`:
/// `σ(Σλᵢrᵢ) ≥ ⋀σ(rᵢ)`, `τ(Σλᵢrᵢ) ≥ ⋀τ(rᵢ)`, `η(Σλᵢrᵢ) ≤ ⋁η(rᵢ)`.
pub fn jensen_check(
    d: &PictureFuzzyMultiset,
    points: &[f64],
    weights: &WeightVector,
    level: usize,
) -> Result<JensenReport> {
    let k = d.check_level(level)?;
    if points.len() != weights.len() {
        return Err(PfmsError::LengthMismatch {
            expected: weights.len(),
            found: points.len(),
        });
    }
    let grid = d.grid();
    let mut lo = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY];
    let mut combined = 0.0;
    for (&r, &w) in points.iter().zip(weights.weights()) {
        let r = grid.check_contains(r)?;
        let g = d.evaluate_at(r, k);
        lo[0] = lo[0].min(g.sigma());
        lo[1] = lo[1].min(g.tau());
        lo[2] = lo[2].max(g.eta());
        combined += w * r;
    }
    let point = combined.clamp(grid.lo(), grid.hi());
    let g = d.evaluate_at(point, k);
    let slacks = [g.sigma() - lo[0], g.tau() - lo[1], lo[2] - g.eta()];
    Ok(JensenReport {
        point,
        slacks,
        holds: slacks.iter().all(|&s| s >= -TOL_CMP),
    })
}

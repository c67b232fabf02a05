//! Brute-force oracles. They only use [`PictureFuzzyMultiset::evaluate`] and
//! direct enumeration, never the unimodality shortcut or the envelope
//! formulas they are compared against.

use crate::convexity::GradeField;
use crate::error::{PfmsError, Result};
use crate::grade::Channel;
use crate::multiset::PictureFuzzyMultiset;
use crate::TOL_CMP;

pub const DEFAULT_LAMBDA_RESOLUTION: usize = 21;
pub const HULL_ORACLE_MAX_GRID: usize = 7;
pub const HULL_ORACLE_MIN_STEP: f64 = 0.05;

/// Checks the segment inequality for every pair of points of a uniform
/// `resolution`-point lattice on the domain and every λ of a 21-point
/// lattice on `[0, 1]`.
pub fn oracle_convexity(d: &PictureFuzzyMultiset, resolution: usize) -> bool {
    oracle_convexity_with(d, resolution, DEFAULT_LAMBDA_RESOLUTION)
}

pub fn oracle_convexity_with(
    d: &PictureFuzzyMultiset,
    resolution: usize,
    lambda_resolution: usize,
) -> bool {
    let (lo, hi) = (d.grid().lo(), d.grid().hi());
    let resolution = resolution.max(2);
    let lambda_resolution = lambda_resolution.max(2);
    let xs: Vec<f64> = (0..resolution)
        .map(|a| lo + (hi - lo) * a as f64 / (resolution - 1) as f64)
        .map(|x| x.clamp(lo, hi))
        .collect();
    let lambdas: Vec<f64> = (0..lambda_resolution)
        .map(|j| j as f64 / (lambda_resolution - 1) as f64)
        .collect();

    for level in 1..=d.depth() {
        let grades: Vec<_> = xs
            .iter()
            .map(|&x| d.evaluate(x, level).expect("lattice inside domain"))
            .collect();
        for a in 0..xs.len() {
            for b in a + 1..xs.len() {
                for &lambda in &lambdas {
                    let z = ((1.0 - lambda) * xs[a] + lambda * xs[b]).clamp(lo, hi);
                    let gz = d.evaluate(z, level).expect("combination inside domain");
                    let (ga, gb) = (grades[a], grades[b]);
                    if gz.sigma() < ga.sigma().min(gb.sigma()) - TOL_CMP
                        || gz.tau() < ga.tau().min(gb.tau()) - TOL_CMP
                        || gz.eta() > ga.eta().max(gb.eta()) + TOL_CMP
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Exhaustive search for the channel-wise hull of a small multiset.
///
/// For σ and τ every unimodal sequence dominating the node values is
/// enumerated and the pointwise minimum over all of them is kept; η is
/// handled the same way on negated values (anti-unimodal, dominated,
/// pointwise maximum). Candidate values are restricted to the values the
/// channel attains at its nodes: rounding any feasible sequence down to that
/// set keeps it unimodal and dominating, so no minimum is lost.
pub fn oracle_hull(d: &PictureFuzzyMultiset, step: f64) -> Result<GradeField> {
    if d.len() > HULL_ORACLE_MAX_GRID {
        return Err(PfmsError::TooLarge(format!(
            "{} grid points (limit {HULL_ORACLE_MAX_GRID})",
            d.len()
        )));
    }
    if step.is_nan() || step < HULL_ORACLE_MIN_STEP - 1e-12 {
        return Err(PfmsError::TooLarge(format!(
            "value step {step} (minimum {HULL_ORACLE_MIN_STEP})"
        )));
    }
    let mut rows = d.to_rows();
    for level in 1..=d.depth() {
        for channel in Channel::ALL {
            let values = d.channel_values(level, channel)?;
            let envelope = if channel.is_upper() {
                least_unimodal_majorant(&values)
            } else {
                let negated: Vec<f64> = values.iter().map(|v| -v).collect();
                least_unimodal_majorant(&negated)
                    .into_iter()
                    .map(|v| -v)
                    .collect()
            };
            for (row, v) in rows.iter_mut().zip(envelope) {
                row[level - 1][channel.index()] = v;
            }
        }
    }
    Ok(GradeField::from_values(d.grid().clone(), d.depth(), rows))
}

fn least_unimodal_majorant(values: &[f64]) -> Vec<f64> {
    let mut candidates = values.to_vec();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let mut best = vec![f64::INFINITY; values.len()];
    let mut current = Vec::with_capacity(values.len());
    enumerate(values, &candidates, &mut current, false, &mut best);
    best
}

/// Depth-first enumeration of every unimodal sequence over `candidates`
/// with `seq[j] ≥ values[j]`; `descending` records whether the peak has
/// been passed.
fn enumerate(
    values: &[f64],
    candidates: &[f64],
    current: &mut Vec<f64>,
    descending: bool,
    best: &mut [f64],
) {
    let j = current.len();
    if j == values.len() {
        for (b, &c) in best.iter_mut().zip(current.iter()) {
            *b = b.min(c);
        }
        return;
    }
    for &c in candidates.iter().filter(|&&c| c >= values[j]) {
        let next_descending = match current.last() {
            None => false,
            Some(&prev) if c > prev => {
                if descending {
                    continue;
                }
                false
            }
            Some(&prev) => descending || c < prev,
        };
        current.push(c);
        enumerate(values, candidates, current, next_descending, best);
        current.pop();
    }
}

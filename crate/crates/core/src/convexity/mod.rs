//! Convexity of picture fuzzy multisets.
//!
//! A multiset is convex when, at every level, σ and τ are quasi-concave and
//! η is quasi-convex along every segment of the domain. For the
//! piecewise-linear channels used here this reduces to unimodality of the
//! node sequences, which [`is_convex_exact`] checks directly. The remaining
//! submodules cover `(r,s,t)`-cuts, the finite-point (Jensen-type) criterion
//! and the channel-wise convex hull.

mod cut;
mod hull;
mod jensen;

pub use cut::{cut, cuts_all_convex, CutRegion, CutThresholds, CutsReport};
pub use hull::{
    convex_hull, hull_membership_test, hull_theorem_check, quasi_concave_envelope,
    quasi_convex_envelope, GradeField, HullComparison,
};
pub use jensen::{jensen_check, JensenReport};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::grade::Channel;
use crate::multiset::PictureFuzzyMultiset;
use crate::TOL_CMP;

/// A concrete falsification of the segment inequality: at
/// `z = (1 − λ)x + λy` the channel value `lhs` falls below (σ, τ) or rises
/// above (η) the endpoint bound `rhs` by more than [`TOL_CMP`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub x: f64,
    pub y: f64,
    pub lambda: f64,
    pub level: usize,
    pub channel: Channel,
    pub lhs: f64,
    pub rhs: f64,
}

impl Witness {
    /// The combined point `(1 − λ)x + λy`.
    pub fn point(&self) -> f64 {
        (1.0 - self.lambda) * self.x + self.lambda * self.y
    }

    /// Amount by which the inequality is violated (positive for a violation).
    pub fn violation(&self) -> f64 {
        if self.channel.is_upper() {
            self.rhs - self.lhs
        } else {
            self.lhs - self.rhs
        }
    }

    /// Re-evaluates the witness against `d`, returning the fresh violation.
    pub fn recheck(&self, d: &PictureFuzzyMultiset) -> Option<f64> {
        let gx = d.evaluate(self.x, self.level).ok()?;
        let gy = d.evaluate(self.y, self.level).ok()?;
        let gz = d.evaluate(self.point(), self.level).ok()?;
        let (vx, vy, vz) = (
            gx.channel(self.channel),
            gy.channel(self.channel),
            gz.channel(self.channel),
        );
        Some(if self.channel.is_upper() {
            vx.min(vy) - vz
        } else {
            vz - vx.max(vy)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub convex: bool,
    pub witness: Option<Witness>,
    /// Set when the check quantified over nothing (no sampled pairs).
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub vacuous: bool,
}

impl ConvexityReport {
    fn holds() -> Self {
        ConvexityReport {
            convex: true,
            witness: None,
            vacuous: false,
        }
    }

    fn fails(witness: Witness) -> Self {
        ConvexityReport {
            convex: false,
            witness: Some(witness),
            vacuous: false,
        }
    }
}

/// First interior strict dip of `values` (a strict peak when `upper` is
/// false): returns `(left, dip, right)` node indices where both flanking
/// nodes beat the dip by more than [`TOL_CMP`].
pub(crate) fn find_dip(values: &[f64], upper: bool) -> Option<(usize, usize, usize)> {
    let n = values.len();
    if n < 3 {
        return None;
    }
    // Orient so that a violation is always a dip.
    let v = |i: usize| if upper { values[i] } else { -values[i] };
    let mut suffix_best = vec![f64::NEG_INFINITY; n + 1];
    for i in (0..n).rev() {
        suffix_best[i] = suffix_best[i + 1].max(v(i));
    }
    let mut prefix_best = v(0);
    for i in 1..n - 1 {
        let bound = prefix_best.min(suffix_best[i + 1]);
        if v(i) < bound - TOL_CMP {
            let left = (0..i).rev().find(|&j| v(j) > v(i) + TOL_CMP)?;
            let right = (i + 1..n).find(|&j| v(j) > v(i) + TOL_CMP)?;
            return Some((left, i, right));
        }
        prefix_best = prefix_best.max(v(i));
    }
    None
}

fn witness_from_dip(
    d: &PictureFuzzyMultiset,
    level: usize,
    channel: Channel,
    (left, dip, right): (usize, usize, usize),
) -> Witness {
    let pts = d.grid().points();
    let (x, y) = (pts[left], pts[right]);
    let lambda = (pts[dip] - x) / (y - x);
    let values = d.channel_values_at(level - 1, channel);
    let rhs = if channel.is_upper() {
        values[left].min(values[right])
    } else {
        values[left].max(values[right])
    };
    let z = ((1.0 - lambda) * x + lambda * y).clamp(x, y);
    let lhs = d.evaluate_at(z, level - 1).channel(channel);
    Witness {
        x,
        y,
        lambda,
        level,
        channel,
        lhs,
        rhs,
    }
}

/// Exact convexity check of a single level (numbered from 1).
pub fn level_report(d: &PictureFuzzyMultiset, level: usize) -> crate::Result<ConvexityReport> {
    let k = d.check_level(level)?;
    for channel in Channel::ALL {
        let values = d.channel_values_at(k, channel);
        if let Some(dip) = find_dip(&values, channel.is_upper()) {
            return Ok(ConvexityReport::fails(witness_from_dip(
                d, level, channel, dip,
            )));
        }
    }
    Ok(ConvexityReport::holds())
}

/// Exact convexity: every level's σ and τ node sequences are unimodal and
/// every η node sequence is anti-unimodal. Plateaus are allowed; only
/// interior dips deeper than [`TOL_CMP`] falsify.
pub fn is_convex_exact(d: &PictureFuzzyMultiset) -> ConvexityReport {
    for level in 1..=d.depth() {
        let report = level_report(d, level).expect("level in range");
        if !report.convex {
            return report;
        }
    }
    ConvexityReport::holds()
}

/// Monte Carlo check of the segment inequality: `pair_samples` random
/// `(x, y)` pairs, each tested at the interior λ grid `j / (lambda_samples + 1)`.
///
/// A `false` answer always carries a witness; `true` is only probabilistic.
pub fn is_convex_sampled(
    d: &PictureFuzzyMultiset,
    pair_samples: usize,
    lambda_samples: usize,
    seed: u64,
) -> ConvexityReport {
    if pair_samples == 0 || lambda_samples == 0 {
        return ConvexityReport {
            convex: true,
            witness: None,
            vacuous: true,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (d.grid().lo(), d.grid().hi());
    let lambdas: Vec<f64> = (1..=lambda_samples)
        .map(|j| j as f64 / (lambda_samples + 1) as f64)
        .collect();
    for _ in 0..pair_samples {
        let (x, y) = if lo < hi {
            (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi))
        } else {
            (lo, hi)
        };
        for k in 0..d.depth() {
            let gx = d.evaluate_at(x, k);
            let gy = d.evaluate_at(y, k);
            for &lambda in &lambdas {
                let z = ((1.0 - lambda) * x + lambda * y).clamp(lo, hi);
                let gz = d.evaluate_at(z, k);
                for channel in Channel::ALL {
                    let (vx, vy, vz) = (
                        gx.channel(channel),
                        gy.channel(channel),
                        gz.channel(channel),
                    );
                    let (violated, rhs) = if channel.is_upper() {
                        let rhs = vx.min(vy);
                        (vz < rhs - TOL_CMP, rhs)
                    } else {
                        let rhs = vx.max(vy);
                        (vz > rhs + TOL_CMP, rhs)
                    };
                    if violated {
                        return ConvexityReport::fails(Witness {
                            x,
                            y,
                            lambda,
                            level: k + 1,
                            channel,
                            lhs: vz,
                            rhs,
                        });
                    }
                }
            }
        }
    }
    ConvexityReport::holds()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn convex_fixture() -> PictureFuzzyMultiset {
        PictureFuzzyMultiset::from_rows(
            vec![0.0, 1.0, 2.0],
            &[
                vec![[0.2, 0.1, 0.5]],
                vec![[0.6, 0.2, 0.1]],
                vec![[0.3, 0.1, 0.4]],
            ],
        )
        .unwrap()
    }

    pub(crate) fn bimodal_fixture() -> PictureFuzzyMultiset {
        PictureFuzzyMultiset::from_rows(
            vec![0.0, 1.0, 2.0],
            &[
                vec![[0.6, 0.1, 0.3]],
                vec![[0.1, 0.2, 0.1]],
                vec![[0.5, 0.1, 0.4]],
            ],
        )
        .unwrap()
    }

    #[test]
    fn exact_accepts_convex_fixture() {
        assert!(is_convex_exact(&convex_fixture()).convex);
    }

    #[test]
    fn exact_rejects_bimodal_with_midpoint_witness() {
        let d = bimodal_fixture();
        let report = is_convex_exact(&d);
        assert!(!report.convex);
        let w = report.witness.unwrap();
        assert_eq!((w.x, w.y, w.lambda, w.level), (0.0, 2.0, 0.5, 1));
        assert_eq!(w.channel, Channel::Positive);
        assert_eq!(w.lhs, 0.1);
        assert_eq!(w.rhs, 0.5);
        assert!(w.recheck(&d).unwrap() > TOL_CMP);
    }

    #[test]
    fn exact_accepts_constant_and_plateaus() {
        let c = PictureFuzzyMultiset::from_rows(
            vec![0.0, 1.0, 2.0, 3.0],
            &vec![vec![[0.3, 0.3, 0.3]]; 4],
        )
        .unwrap();
        assert!(is_convex_exact(&c).convex);
        // a sub-tolerance dip is ignored
        let p = PictureFuzzyMultiset::from_rows(
            vec![0.0, 1.0, 2.0],
            &[
                vec![[0.5, 0.0, 0.0]],
                vec![[0.5 - 1e-10, 0.0, 0.0]],
                vec![[0.5, 0.0, 0.0]],
            ],
        )
        .unwrap();
        assert!(is_convex_exact(&p).convex);
    }

    #[test]
    fn exact_detects_negative_bump() {
        let d = PictureFuzzyMultiset::from_rows(
            vec![0.0, 1.0, 2.0],
            &[
                vec![[0.0, 0.0, 0.1]],
                vec![[0.0, 0.0, 0.6]],
                vec![[0.0, 0.0, 0.2]],
            ],
        )
        .unwrap();
        let w = is_convex_exact(&d).witness.unwrap();
        assert_eq!(w.channel, Channel::Negative);
        assert_eq!((w.lhs, w.rhs), (0.6, 0.2));
    }

    #[test]
    fn dip_flanks_are_nearest_higher_nodes() {
        let values = [0.2, 0.9, 0.5, 0.1, 0.1, 0.6, 0.3];
        assert_eq!(find_dip(&values, true), Some((1, 2, 5)));
        assert_eq!(find_dip(&[0.1, 0.5, 0.5, 0.2], true), None);
        assert_eq!(find_dip(&[0.5, 0.1, 0.1, 0.4], false), None);
        assert_eq!(find_dip(&[0.1, 0.5, 0.2], false), Some((0, 1, 2)));
    }

    #[test]
    fn exact_checks_deeper_levels() {
        let d = PictureFuzzyMultiset::from_rows(
            vec![0.0, 1.0, 2.0],
            &[
                vec![[0.5, 0.1, 0.1], [0.4, 0.1, 0.1]],
                vec![[0.6, 0.1, 0.1], [0.0, 0.1, 0.1]],
                vec![[0.5, 0.1, 0.1], [0.3, 0.1, 0.1]],
            ],
        )
        .unwrap();
        let w = is_convex_exact(&d).witness.unwrap();
        assert_eq!(w.level, 2);
        assert!(level_report(&d, 1).unwrap().convex);
        assert!(!level_report(&d, 2).unwrap().convex);
    }

    #[test]
    fn sampled_is_sound() {
        for seed in 0..20 {
            assert!(is_convex_sampled(&convex_fixture(), 50, 9, seed).convex);
        }
        let d = bimodal_fixture();
        let report = is_convex_sampled(&d, 200, 9, 7);
        assert!(!report.convex);
        assert!(report.witness.unwrap().recheck(&d).unwrap() > TOL_CMP);
    }

    #[test]
    fn sampled_vacuous_without_pairs() {
        let report = is_convex_sampled(&bimodal_fixture(), 0, 9, 1);
        assert!(report.convex && report.vacuous);
    }
}

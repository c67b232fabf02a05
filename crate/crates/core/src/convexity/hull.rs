//! The picture convex hull, computed channel-wise per level: the least
//! quasi-concave majorant of σ and τ and the greatest quasi-convex minorant
//! of η.

use serde::Serialize;

use crate::algebra::WeightVector;
use crate::convexity::find_dip;
use crate::error::{PfmsError, Result};
use crate::grade::{Channel, GradeSequence, GradeTriple};
use crate::multiset::{interpolate, DomainGrid, PictureFuzzyMultiset};
use crate::{TOL_CMP, TOL_SUM};

/// Least unimodal majorant of a node sequence:
/// `min(max(v₀..=vᵢ), max(vᵢ..))` at every node.
pub fn quasi_concave_envelope(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut from_right = values.to_vec();
    for i in (0..n.saturating_sub(1)).rev() {
        from_right[i] = from_right[i].max(from_right[i + 1]);
    }
    let mut running = f64::NEG_INFINITY;
    values
        .iter()
        .zip(from_right)
        .map(|(&v, right)| {
            running = running.max(v);
            running.min(right)
        })
        .collect()
}

/// Greatest anti-unimodal minorant of a node sequence:
/// `max(min(v₀..=vᵢ), min(vᵢ..))` at every node.
pub fn quasi_convex_envelope(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut from_right = values.to_vec();
    for i in (0..n.saturating_sub(1)).rev() {
        from_right[i] = from_right[i].min(from_right[i + 1]);
    }
    let mut running = f64::INFINITY;
    values
        .iter()
        .zip(from_right)
        .map(|(&v, right)| {
            running = running.min(v);
            running.max(right)
        })
        .collect()
}

/// Per-node, per-level channel values in `[0, 1]` without the joint sum
/// constraint, plus a flag recording whether each triple still satisfies
/// `σ + τ + η ≤ 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradeField {
    #[serde(rename = "domain")]
    grid: DomainGrid,
    depth: usize,
    #[serde(rename = "elements")]
    values: Vec<Vec<[f64; 3]>>,
    valid: Vec<Vec<bool>>,
}

impl GradeField {
    pub fn from_pfms(d: &PictureFuzzyMultiset) -> Self {
        Self::from_values(d.grid().clone(), d.depth(), d.to_rows())
    }

    pub(crate) fn from_values(grid: DomainGrid, depth: usize, values: Vec<Vec<[f64; 3]>>) -> Self {
        let valid = values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| t[0] + t[1] + t[2] <= 1.0 + TOL_SUM)
                    .collect()
            })
            .collect();
        GradeField {
            grid,
            depth,
            values,
            valid,
        }
    }

    #[inline]
    pub fn grid(&self) -> &DomainGrid {
        &self.grid
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.depth
    }

    fn check_level(&self, level: usize) -> Result<usize> {
        if level >= 1 && level <= self.depth {
            Ok(level - 1)
        } else {
            Err(PfmsError::BadLevel {
                level,
                depth: self.depth,
            })
        }
    }

    /// `[σ, τ, η]` at `node` and `level` (levels numbered from 1).
    pub fn values(&self, node: usize, level: usize) -> Result<[f64; 3]> {
        let k = self.check_level(level)?;
        Ok(self.values[node][k])
    }

    pub fn is_valid(&self, node: usize, level: usize) -> Result<bool> {
        let k = self.check_level(level)?;
        Ok(self.valid[node][k])
    }

    pub fn all_valid(&self) -> bool {
        self.valid.iter().flatten().all(|&v| v)
    }

    pub fn invalid_count(&self) -> usize {
        self.valid.iter().flatten().filter(|&&v| !v).count()
    }

    pub fn channel_values(&self, level: usize, channel: Channel) -> Result<Vec<f64>> {
        let k = self.check_level(level)?;
        Ok(self.channel_values_at(k, channel))
    }

    pub(crate) fn channel_values_at(&self, k: usize, channel: Channel) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| row[k][channel.index()])
            .collect()
    }

    /// Linear interpolation of all three channels at `x`.
    pub fn evaluate(&self, x: f64, level: usize) -> Result<[f64; 3]> {
        let k = self.check_level(level)?;
        let x = self.grid.check_contains(x)?;
        Ok(Channel::ALL.map(|ch| interpolate(&self.grid, &self.channel_values_at(k, ch), x)))
    }

    /// The channel-wise hull of this field.
    pub fn hull(&self) -> GradeField {
        let mut values = self.values.clone();
        for k in 0..self.depth {
            for channel in Channel::ALL {
                let column = self.channel_values_at(k, channel);
                let env = if channel.is_upper() {
                    quasi_concave_envelope(&column)
                } else {
                    quasi_convex_envelope(&column)
                };
                for (row, v) in values.iter_mut().zip(env) {
                    row[k][channel.index()] = v;
                }
            }
        }
        GradeField::from_values(self.grid.clone(), self.depth, values)
    }

    /// True if every level has quasi-concave σ, τ and quasi-convex η.
    pub fn is_channelwise_convex(&self) -> bool {
        (0..self.depth).all(|k| {
            Channel::ALL
                .iter()
                .all(|&ch| find_dip(&self.channel_values_at(k, ch), ch.is_upper()).is_none())
        })
    }

    /// σ, τ at least those of `d` and η at most that of `d`, at every node.
    pub fn dominates(&self, d: &PictureFuzzyMultiset) -> bool {
        d.grades().iter().zip(&self.values).all(|(seq, row)| {
            seq.levels().iter().zip(row).all(|(g, h)| {
                h[0] + TOL_CMP >= g.sigma()
                    && h[1] + TOL_CMP >= g.tau()
                    && h[2] <= g.eta() + TOL_CMP
            })
        })
    }

    /// Converts back into a multiset when every triple is valid.
    pub fn to_pfms(&self) -> Option<PictureFuzzyMultiset> {
        if !self.all_valid() {
            return None;
        }
        let grades = self
            .values
            .iter()
            .map(|row| {
                let levels = row.iter().map(|&t| GradeTriple::from_array(t)).collect();
                GradeSequence::from_levels_unchecked(levels)
            })
            .collect();
        PictureFuzzyMultiset::new(self.grid.clone(), grades).ok()
    }

    pub fn rows(&self) -> &[Vec<[f64; 3]>] {
        &self.values
    }

    pub fn validity(&self) -> &[Vec<bool>] {
        &self.valid
    }
}

/// The picture convex hull of `d`. Raising σ, τ and lowering η can break
/// the sum constraint, so the result is a [`GradeField`] with validity flags.
pub fn convex_hull(d: &PictureFuzzyMultiset) -> GradeField {
    GradeField::from_pfms(d).hull()
}

/// The grade combination `Σλᵢ·D(rᵢ)` at level `level`, componentwise.
pub fn hull_membership_test(
    d: &PictureFuzzyMultiset,
    points: &[f64],
    weights: &WeightVector,
    level: usize,
) -> Result<GradeTriple> {
    let k = d.check_level(level)?;
    if points.len() != weights.len() {
        return Err(PfmsError::LengthMismatch {
            expected: weights.len(),
            found: points.len(),
        });
    }
    let mut acc = [0.0; 3];
    for (&r, &w) in points.iter().zip(weights.weights()) {
        let g = d.evaluate_at(d.grid().check_contains(r)?, k);
        acc[0] += w * g.sigma();
        acc[1] += w * g.tau();
        acc[2] += w * g.eta();
    }
    Ok(GradeTriple::from_array(acc))
}

/// Grade combination versus hull value at the combined domain point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HullComparison {
    pub point: f64,
    pub combination: [f64; 3],
    pub hull: [f64; 3],
    /// True when the combination stays inside the hull bounds
    /// (σ, τ at most the hull's, η at least the hull's).
    pub holds: bool,
}

/// Compares the grade-side combination `Σλᵢ·D(rᵢ)` with `Pch(D)` evaluated
/// at the domain-side combination `Σλᵢrᵢ`.
///
/// Reading "the hull consists of all convex combinations" literally would
/// require `holds` for every draw; it fails whenever a blend of two peaks
/// exceeds the envelope between them.
pub fn hull_theorem_check(
    d: &PictureFuzzyMultiset,
    hull: &GradeField,
    points: &[f64],
    weights: &WeightVector,
    level: usize,
) -> Result<HullComparison> {
    let combination = hull_membership_test(d, points, weights, level)?.to_array();
    let point: f64 = points
        .iter()
        .zip(weights.weights())
        .map(|(r, w)| r * w)
        .sum::<f64>()
        .clamp(d.grid().lo(), d.grid().hi());
    let h = hull.evaluate(point, level)?;
    let holds = combination[0] <= h[0] + TOL_CMP
        && combination[1] <= h[1] + TOL_CMP
        && combination[2] + TOL_CMP >= h[2];
    Ok(HullComparison {
        point,
        combination,
        hull: h,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexity::tests::{bimodal_fixture, convex_fixture};

    #[test]
    fn envelope_examples() {
        assert_eq!(
            quasi_concave_envelope(&[0.6, 0.1, 0.5]),
            vec![0.6, 0.5, 0.5]
        );
        assert_eq!(quasi_convex_envelope(&[0.1, 0.6, 0.2]), vec![0.1, 0.2, 0.2]);
        assert_eq!(quasi_concave_envelope(&[0.3]), vec![0.3]);
        assert!(quasi_concave_envelope(&[]).is_empty());
        assert_eq!(
            quasi_concave_envelope(&[0.2, 0.9, 0.5, 0.1, 0.6, 0.3]),
            vec![0.2, 0.9, 0.6, 0.6, 0.6, 0.3]
        );
    }

    #[test]
    fn hull_of_convex_is_identity() {
        let d = convex_fixture();
        let h = convex_hull(&d);
        assert_eq!(h, GradeField::from_pfms(&d));
        assert!(h.all_valid());
        assert_eq!(h.to_pfms().unwrap(), d);
    }

    #[test]
    fn hull_of_bimodal() {
        let d = bimodal_fixture();
        let h = convex_hull(&d);
        assert_eq!(
            h.channel_values(1, Channel::Positive).unwrap(),
            vec![0.6, 0.5, 0.5]
        );
        assert!(h.is_channelwise_convex());
        assert!(h.dominates(&d));
        assert_eq!(h.hull(), h);
    }

    #[test]
    fn hull_can_break_the_sum_constraint() {
        let d = PictureFuzzyMultiset::from_rows(
            vec![0.0, 1.0, 2.0],
            &[
                vec![[0.9, 0.0, 0.1]],
                vec![[0.0, 0.5, 0.5]],
                vec![[0.9, 0.1, 0.0]],
            ],
        )
        .unwrap();
        let h = convex_hull(&d);
        assert_eq!(h.values(1, 1).unwrap(), [0.9, 0.5, 0.1]);
        assert!(!h.is_valid(1, 1).unwrap());
        assert_eq!(h.invalid_count(), 1);
        assert!(h.to_pfms().is_none());
    }

    #[test]
    fn membership_examples() {
        let d = bimodal_fixture();
        let one = WeightVector::new(vec![1.0]).unwrap();
        assert_eq!(
            hull_membership_test(&d, &[0.7], &one, 1).unwrap(),
            d.evaluate(0.7, 1).unwrap()
        );
        let half = WeightVector::new(vec![0.5, 0.5]).unwrap();
        let twice = hull_membership_test(&d, &[0.7, 0.7], &half, 1).unwrap();
        assert!(twice.approx_eq(&d.evaluate(0.7, 1).unwrap()));
    }

    #[test]
    fn documented_hull_discrepancy() {
        let d = bimodal_fixture();
        let half = WeightVector::new(vec![0.5, 0.5]).unwrap();
        let cmp = hull_theorem_check(&d, &convex_hull(&d), &[0.0, 2.0], &half, 1).unwrap();
        assert_eq!(cmp.point, 1.0);
        assert!((cmp.combination[0] - 0.55).abs() < 1e-12);
        assert_eq!(cmp.hull[0], 0.5);
        assert!(!cmp.holds);
    }
}

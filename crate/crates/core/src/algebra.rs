//! Lattice operations and convex combinations, applied node-wise and
//! level-wise: level `k` of a result depends only on level `k` of the operands.

use crate::error::{PfmsError, Result};
use crate::grade::{GradeSequence, GradeTriple, UnitValue};
use crate::multiset::PictureFuzzyMultiset;
use crate::{TOL_CMP, TOL_SUM};

/// Scalar convex weights, `Σλᵢ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(PfmsError::WeightSumInvalid { sum: 0.0 });
        }
        for &w in &weights {
            UnitValue::named("weight", w)?;
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > TOL_SUM {
            return Err(PfmsError::WeightSumInvalid { sum });
        }
        Ok(WeightVector { weights })
    }

    /// Weights `(1 − λ, λ)` for the two endpoints of a segment.
    pub fn pair(lambda: UnitValue) -> Self {
        let (wx, wy) = affine_pair(1.0 - lambda.get(), lambda.get());
        WeightVector {
            weights: vec![wx, wy],
        }
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Channel-split weights `(λᵢσ, λᵢτ, λᵢη)` with a joint sum of 1 over all
/// points and channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelWeights {
    weights: Vec<[f64; 3]>,
}

impl ChannelWeights {
    pub fn new(weights: Vec<[f64; 3]>) -> Result<Self> {
        let mut total = 0.0;
        for w in &weights {
            UnitValue::named("sigma weight", w[0])?;
            UnitValue::named("tau weight", w[1])?;
            UnitValue::named("eta weight", w[2])?;
            let per_point = w[0] + w[1] + w[2];
            if per_point > 1.0 + TOL_SUM {
                return Err(PfmsError::WeightSumInvalid { sum: per_point });
            }
            total += per_point;
        }
        if weights.is_empty() || (total - 1.0).abs() > TOL_SUM {
            return Err(PfmsError::WeightSumInvalid { sum: total });
        }
        Ok(ChannelWeights { weights })
    }

    #[inline]
    pub fn weights(&self) -> &[[f64; 3]] {
        &self.weights
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Canonical complementary weight pair for a two-term blend.
///
/// The larger weight is kept and the smaller one is recomputed as `1 − larger`,
/// which is exact in binary floating point once `larger ≥ 1/2`. Blending
/// `(a, b)` with `λ` and `(b, a)` with `1 − λ` then uses bit-identical weights.
pub(crate) fn affine_pair(wa: f64, wb: f64) -> (f64, f64) {
    if wa >= wb {
        (wa, 1.0 - wa)
    } else {
        (1.0 - wb, wb)
    }
}

fn check_compatible(a: &PictureFuzzyMultiset, b: &PictureFuzzyMultiset) -> Result<()> {
    if !a.grid().same_as(b.grid()) {
        return Err(PfmsError::GridMismatch);
    }
    if a.depth() != b.depth() {
        return Err(PfmsError::DepthMismatch {
            left: a.depth(),
            right: b.depth(),
        });
    }
    Ok(())
}

fn zip_levels(
    a: &PictureFuzzyMultiset,
    b: &PictureFuzzyMultiset,
    f: impl Fn(&GradeTriple, &GradeTriple) -> GradeTriple,
) -> Vec<GradeSequence> {
    a.grades()
        .iter()
        .zip(b.grades())
        .map(|(sa, sb)| {
            let levels = sa
                .levels()
                .iter()
                .zip(sb.levels())
                .map(|(ga, gb)| f(ga, gb))
                .collect();
            GradeSequence::from_levels_unchecked(levels)
        })
        .collect()
}

/// `A ⊆ B`: `σ_A ≤ σ_B`, `τ_A ≤ τ_B` and `η_A ≥ η_B` at every node and level.
pub fn includes(a: &PictureFuzzyMultiset, b: &PictureFuzzyMultiset) -> Result<bool> {
    check_compatible(a, b)?;
    Ok(a.grades().iter().zip(b.grades()).all(|(sa, sb)| {
        sa.levels().iter().zip(sb.levels()).all(|(ga, gb)| {
            ga.sigma() <= gb.sigma() + TOL_CMP
                && ga.tau() <= gb.tau() + TOL_CMP
                && ga.eta() + TOL_CMP >= gb.eta()
        })
    }))
}

pub fn equals(a: &PictureFuzzyMultiset, b: &PictureFuzzyMultiset) -> Result<bool> {
    Ok(includes(a, b)? && includes(b, a)?)
}

/// Equality after putting every point's levels into canonical order.
pub fn equals_up_to_level_order(
    a: &PictureFuzzyMultiset,
    b: &PictureFuzzyMultiset,
) -> Result<bool> {
    check_compatible(a, b)?;
    Ok(a.grades().iter().zip(b.grades()).all(|(sa, sb)| {
        sa.sorted()
            .levels()
            .iter()
            .zip(sb.sorted().levels())
            .all(|(ga, gb)| ga.approx_eq(gb))
    }))
}

/// Level-wise `(σ_A ∨ σ_B, τ_A ∧ τ_B, η_A ∧ η_B)`.
pub fn union(a: &PictureFuzzyMultiset, b: &PictureFuzzyMultiset) -> Result<PictureFuzzyMultiset> {
    check_compatible(a, b)?;
    // The triple owning the larger σ bounds the sum; max of nonincreasing
    // sequences stays nonincreasing.
    let grades = zip_levels(a, b, |x, y| {
        GradeTriple::from_raw(
            x.sigma().max(y.sigma()),
            x.tau().min(y.tau()),
            x.eta().min(y.eta()),
        )
    });
    Ok(PictureFuzzyMultiset::from_parts_unchecked(
        a.grid().clone(),
        grades,
    ))
}

/// Level-wise `(σ_A ∧ σ_B, τ_A ∧ τ_B, η_A ∨ η_B)`.
pub fn intersection(
    a: &PictureFuzzyMultiset,
    b: &PictureFuzzyMultiset,
) -> Result<PictureFuzzyMultiset> {
    check_compatible(a, b)?;
    let grades = zip_levels(a, b, |x, y| {
        GradeTriple::from_raw(
            x.sigma().min(y.sigma()),
            x.tau().min(y.tau()),
            x.eta().max(y.eta()),
        )
    });
    Ok(PictureFuzzyMultiset::from_parts_unchecked(
        a.grid().clone(),
        grades,
    ))
}

/// Swaps σ and η everywhere, then re-sorts each point's levels by the new σ.
pub fn complement(a: &PictureFuzzyMultiset) -> PictureFuzzyMultiset {
    let grades = a
        .grades()
        .iter()
        .map(|seq| {
            let mut levels: Vec<GradeTriple> =
                seq.levels().iter().map(GradeTriple::complement).collect();
            levels.sort_by(GradeTriple::level_order);
            GradeSequence::from_levels_unchecked(levels)
        })
        .collect();
    PictureFuzzyMultiset::from_parts_unchecked(a.grid().clone(), grades)
}

/// `λ·A + (1 − λ)·B` on all three channels. The result is re-validated and
/// never re-sorted.
pub fn convex_combination(
    a: &PictureFuzzyMultiset,
    b: &PictureFuzzyMultiset,
    lambda: UnitValue,
) -> Result<PictureFuzzyMultiset> {
    check_compatible(a, b)?;
    let (wa, wb) = affine_pair(lambda.get(), 1.0 - lambda.get());
    let grades = zip_levels(a, b, |x, y| blend(x, y, wa, wb));
    PictureFuzzyMultiset::new(a.grid().clone(), grades)
}

#[inline]
fn blend(x: &GradeTriple, y: &GradeTriple, wx: f64, wy: f64) -> GradeTriple {
    GradeTriple::from_raw(
        wx * x.sigma() + wy * y.sigma(),
        wx * x.tau() + wy * y.tau(),
        wx * x.eta() + wy * y.eta(),
    )
}

/// `(1 − λ)·D(x) + λ·D(y)` at level `level`, componentwise.
pub fn segment_grade_blend(
    d: &PictureFuzzyMultiset,
    x: f64,
    y: f64,
    lambda: UnitValue,
    level: usize,
) -> Result<GradeTriple> {
    let gx = d.evaluate(x, level)?;
    let gy = d.evaluate(y, level)?;
    let (wx, wy) = affine_pair(1.0 - lambda.get(), lambda.get());
    Ok(blend(&gx, &gy, wx, wy))
}

/// Picture convex combination of grades with channel-split weights:
/// `σ = Σ λᵢσ·σᵢ`, `τ = Σ λᵢτ·τᵢ`, `η = Σ λᵢη·ηᵢ`.
pub fn pcc_points(points: &[GradeTriple], weights: &ChannelWeights) -> Result<GradeTriple> {
    if points.len() != weights.len() {
        return Err(PfmsError::LengthMismatch {
            expected: weights.len(),
            found: points.len(),
        });
    }
    let mut acc = [0.0; 3];
    for (g, w) in points.iter().zip(weights.weights()) {
        acc[0] += w[0] * g.sigma();
        acc[1] += w[1] * g.tau();
        acc[2] += w[2] * g.eta();
    }
    // σ + τ + η ≤ Σᵢ(λᵢσ + λᵢτ + λᵢη) = 1 because every grade is at most 1.
    GradeTriple::new(acc[0], acc[1], acc[2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(triple: [f64; 3]) -> PictureFuzzyMultiset {
        PictureFuzzyMultiset::from_rows(vec![0.0], &[vec![triple]]).unwrap()
    }

    fn node(d: &PictureFuzzyMultiset) -> [f64; 3] {
        d.node_grade(0, 1).unwrap().to_array()
    }

    fn close(a: [f64; 3], b: [f64; 3]) -> bool {
        a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn union_and_intersection_examples() {
        let a = point([0.5, 0.2, 0.2]);
        let b = point([0.4, 0.3, 0.1]);
        assert_eq!(node(&union(&a, &b).unwrap()), [0.5, 0.2, 0.1]);
        assert_eq!(node(&intersection(&a, &b).unwrap()), [0.4, 0.2, 0.2]);
        assert_eq!(union(&a, &a).unwrap(), a);
        assert_eq!(intersection(&a, &a).unwrap(), a);
        let zero = point([0.0, 0.0, 0.0]);
        assert_eq!(node(&union(&a, &zero).unwrap()), [0.5, 0.0, 0.0]);
    }

    #[test]
    fn inclusion_examples() {
        let a = point([0.2, 0.1, 0.5]);
        let b = point([0.4, 0.2, 0.3]);
        assert!(includes(&a, &b).unwrap());
        assert!(!includes(&b, &a).unwrap());
        assert!(includes(&a, &a).unwrap());
        assert!(equals(&a, &a).unwrap());
        assert!(!equals(&a, &b).unwrap());
        let nudged = point([0.2 + 5e-10, 0.1, 0.5 - 5e-10]);
        assert!(equals(&a, &nudged).unwrap());
    }

    #[test]
    fn mismatched_operands() {
        let a = point([0.2, 0.1, 0.5]);
        let shifted = PictureFuzzyMultiset::from_rows(vec![1.0], &[vec![[0.2, 0.1, 0.5]]]).unwrap();
        assert_eq!(union(&a, &shifted), Err(PfmsError::GridMismatch));
        let deeper = a.pad(2, GradeTriple::ZERO).unwrap();
        assert_eq!(
            intersection(&a, &deeper),
            Err(PfmsError::DepthMismatch { left: 1, right: 2 })
        );
        assert_eq!(
            includes(&a, &deeper),
            Err(PfmsError::DepthMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn complement_examples() {
        assert_eq!(node(&complement(&point([0.5, 0.2, 0.2]))), [0.2, 0.2, 0.5]);
        let d =
            PictureFuzzyMultiset::from_rows(vec![0.0], &[vec![[0.7, 0.1, 0.0], [0.4, 0.1, 0.5]]])
                .unwrap();
        let c = complement(&d);
        assert_eq!(c.node_grade(0, 1).unwrap().to_array(), [0.5, 0.1, 0.4]);
        assert_eq!(c.node_grade(0, 2).unwrap().to_array(), [0.0, 0.1, 0.7]);
        assert!(equals_up_to_level_order(&complement(&c), &d).unwrap());
    }

    #[test]
    fn absorption_fails_for_picture_operators() {
        // A ∪ (A ∩ B) keeps min(τ_A, τ_B) rather than τ_A.
        let a = point([0.2, 0.5, 0.1]);
        let b = point([0.1, 0.1, 0.3]);
        let absorbed = union(&a, &intersection(&a, &b).unwrap()).unwrap();
        assert_eq!(node(&absorbed), [0.2, 0.1, 0.1]);
        assert!(!equals(&absorbed, &a).unwrap());
    }

    #[test]
    fn convex_combination_examples() {
        let a = point([0.6, 0.1, 0.1]);
        let b = point([0.2, 0.3, 0.3]);
        assert_eq!(convex_combination(&a, &b, UnitValue::ONE).unwrap(), a);
        assert_eq!(convex_combination(&a, &b, UnitValue::ZERO).unwrap(), b);
        let mid = convex_combination(&a, &b, UnitValue::new(0.5).unwrap()).unwrap();
        assert!(close(node(&mid), [0.4, 0.2, 0.2]));
    }

    #[test]
    fn convex_combination_swap_is_exact() {
        let a = point([0.6, 0.1, 0.1]);
        let b = point([0.2, 0.3, 0.3]);
        for lambda in [0.1, 0.3, 0.5, 0.7, 0.123456789, 0.9999] {
            let l = UnitValue::new(lambda).unwrap();
            let m = UnitValue::new(1.0 - lambda).unwrap();
            assert_eq!(
                convex_combination(&a, &b, l).unwrap(),
                convex_combination(&b, &a, m).unwrap()
            );
        }
    }

    #[test]
    fn segment_blend_examples() {
        let d = PictureFuzzyMultiset::from_rows(
            vec![0.0, 1.0],
            &[vec![[0.2, 0.1, 0.5]], vec![[0.3, 0.1, 0.4]]],
        )
        .unwrap();
        let at = |l: f64| {
            segment_grade_blend(&d, 0.0, 1.0, UnitValue::new(l).unwrap(), 1)
                .unwrap()
                .to_array()
        };
        assert_eq!(at(0.0), [0.2, 0.1, 0.5]);
        assert_eq!(at(1.0), [0.3, 0.1, 0.4]);
        assert!(close(at(0.5), [0.25, 0.1, 0.45]));
        assert!(matches!(
            segment_grade_blend(&d, 0.0, 3.0, UnitValue::ONE, 1),
            Err(PfmsError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn pcc_examples() {
        let g = GradeTriple::new(0.6, 0.2, 0.1).unwrap();
        let w = ChannelWeights::new(vec![[1.0, 0.0, 0.0]]).unwrap();
        assert_eq!(pcc_points(&[g], &w).unwrap().to_array(), [0.6, 0.0, 0.0]);

        let h = GradeTriple::new(0.4, 0.1, 0.2).unwrap();
        let w = ChannelWeights::new(vec![[0.3, 0.1, 0.1], [0.3, 0.1, 0.1]]).unwrap();
        assert!(close(
            pcc_points(&[g, h], &w).unwrap().to_array(),
            [0.30, 0.03, 0.03]
        ));

        assert_eq!(
            pcc_points(&[g], &w),
            Err(PfmsError::LengthMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn weight_validation() {
        assert!(WeightVector::new(vec![0.25, 0.75]).is_ok());
        assert!(matches!(
            WeightVector::new(vec![0.5, 0.6]),
            Err(PfmsError::WeightSumInvalid { .. })
        ));
        assert!(matches!(
            WeightVector::new(vec![]),
            Err(PfmsError::WeightSumInvalid { .. })
        ));
        assert!(matches!(
            WeightVector::new(vec![1.5, -0.5]),
            Err(PfmsError::OutOfUnitInterval { .. })
        ));
        assert!(matches!(
            ChannelWeights::new(vec![[0.3, 0.3, 0.3]]),
            Err(PfmsError::WeightSumInvalid { .. })
        ));
        assert!(matches!(
            ChannelWeights::new(vec![[0.6, 0.3, 0.3], [0.0, 0.0, 0.0]]),
            Err(PfmsError::WeightSumInvalid { .. })
        ));
    }
}

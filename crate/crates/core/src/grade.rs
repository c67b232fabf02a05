//! Membership grades: unit values, (positive, neutral, negative) triples and
//! the per-element multiset of triples.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{PfmsError, Result};
use crate::{TOL_CMP, TOL_SUM};

/// A membership degree in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct UnitValue(f64);

impl UnitValue {
    pub const ZERO: UnitValue = UnitValue(0.0);
    pub const ONE: UnitValue = UnitValue(1.0);

    pub fn new(value: f64) -> Result<Self> {
        Self::named("value", value)
    }

    pub(crate) fn named(name: &'static str, value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(UnitValue(value))
        } else {
            Err(PfmsError::OutOfUnitInterval { name, value })
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One of the three membership channels of a picture fuzzy grade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    /// σ, the positive degree.
    Positive,
    /// τ, the neutral degree.
    Neutral,
    /// η, the negative degree.
    Negative,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Positive, Channel::Neutral, Channel::Negative];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Channel::Positive => 0,
            Channel::Neutral => 1,
            Channel::Negative => 2,
        }
    }

    /// Positive and neutral channels must be quasi-concave in a convex
    /// multiset; the negative channel must be quasi-convex.
    #[inline]
    pub fn is_upper(self) -> bool {
        !matches!(self, Channel::Negative)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::Positive => "positive",
            Channel::Neutral => "neutral",
            Channel::Negative => "negative",
        })
    }
}

/// A picture fuzzy grade `(σ, τ, η)` with every component in `[0, 1]` and
/// `σ + τ + η ≤ 1` (up to [`TOL_SUM`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GradeTriple {
    sigma: f64,
    tau: f64,
    eta: f64,
}

impl GradeTriple {
    pub const ZERO: GradeTriple = GradeTriple {
        sigma: 0.0,
        tau: 0.0,
        eta: 0.0,
    };

    pub fn new(sigma: f64, tau: f64, eta: f64) -> Result<Self> {
        UnitValue::named("sigma", sigma)?;
        UnitValue::named("tau", tau)?;
        UnitValue::named("eta", eta)?;
        let sum = sigma + tau + eta;
        if sum > 1.0 + TOL_SUM {
            return Err(PfmsError::SumExceedsOne { sum });
        }
        Ok(GradeTriple { sigma, tau, eta })
    }

    /// Builds a triple from values that are valid by construction (blends and
    /// lattice operations of valid triples), clamping rounding drift into the
    /// unit interval.
    pub(crate) fn from_raw(sigma: f64, tau: f64, eta: f64) -> Self {
        debug_assert!(sigma + tau + eta <= 1.0 + 4.0 * TOL_SUM);
        GradeTriple {
            sigma: sigma.clamp(0.0, 1.0),
            tau: tau.clamp(0.0, 1.0),
            eta: eta.clamp(0.0, 1.0),
        }
    }

    pub(crate) fn from_array(values: [f64; 3]) -> Self {
        Self::from_raw(values[0], values[1], values[2])
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    #[inline]
    pub fn tau(&self) -> f64 {
        self.tau
    }

    #[inline]
    pub fn eta(&self) -> f64 {
        self.eta
    }

    #[inline]
    pub fn channel(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Positive => self.sigma,
            Channel::Neutral => self.tau,
            Channel::Negative => self.eta,
        }
    }

    #[inline]
    pub fn to_array(&self) -> [f64; 3] {
        [self.sigma, self.tau, self.eta]
    }

    /// The refusal degree `1 − (σ + τ + η)`.
    pub fn refusal(&self) -> UnitValue {
        let rho = 1.0 - (self.sigma + self.tau + self.eta);
        // Only rounding drift can push ρ below zero; construction rejects the rest.
        UnitValue(rho.clamp(0.0, 1.0))
    }

    /// Swaps the positive and negative degrees.
    pub fn complement(&self) -> GradeTriple {
        GradeTriple {
            sigma: self.eta,
            tau: self.tau,
            eta: self.sigma,
        }
    }

    /// Componentwise equality within [`TOL_CMP`].
    pub fn approx_eq(&self, other: &GradeTriple) -> bool {
        (self.sigma - other.sigma).abs() <= TOL_CMP
            && (self.tau - other.tau).abs() <= TOL_CMP
            && (self.eta - other.eta).abs() <= TOL_CMP
    }

    /// Canonical level order: σ descending, then τ descending, then η ascending.
    pub(crate) fn level_order(a: &GradeTriple, b: &GradeTriple) -> Ordering {
        b.sigma
            .total_cmp(&a.sigma)
            .then(b.tau.total_cmp(&a.tau))
            .then(a.eta.total_cmp(&b.eta))
    }
}

/// The multiset of grades carried by one domain point: levels `1..=depth`
/// with nonincreasing positive degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GradeSequence {
    levels: Vec<GradeTriple>,
}

impl GradeSequence {
    pub fn new(levels: Vec<GradeTriple>) -> Result<Self> {
        Self::validate(&levels, 0)?;
        Ok(GradeSequence { levels })
    }

    pub fn from_tuples(levels: &[(f64, f64, f64)]) -> Result<Self> {
        let triples = levels
            .iter()
            .map(|&(s, t, e)| GradeTriple::new(s, t, e))
            .collect::<Result<Vec<_>>>()?;
        Self::new(triples)
    }

    /// Sorts levels into canonical order (σ descending, ties broken by τ
    /// descending then η ascending). Never applied implicitly by [`new`].
    ///
    /// [`new`]: GradeSequence::new
    pub fn sort_levels(mut levels: Vec<GradeTriple>) -> Result<Self> {
        if levels.is_empty() {
            return Err(PfmsError::EmptySequence);
        }
        levels.sort_by(GradeTriple::level_order);
        Ok(GradeSequence { levels })
    }

    pub(crate) fn validate(levels: &[GradeTriple], point: usize) -> Result<()> {
        if levels.is_empty() {
            return Err(PfmsError::EmptySequence);
        }
        for (k, pair) in levels.windows(2).enumerate() {
            if pair[1].sigma > pair[0].sigma + TOL_CMP {
                return Err(PfmsError::SigmaOrderViolation {
                    point,
                    level: k + 1,
                });
            }
        }
        Ok(())
    }

    pub(crate) fn from_levels_unchecked(levels: Vec<GradeTriple>) -> Self {
        GradeSequence { levels }
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    #[inline]
    pub fn levels(&self) -> &[GradeTriple] {
        &self.levels
    }

    /// Level `k`, numbered from 1.
    pub fn level(&self, k: usize) -> Option<&GradeTriple> {
        k.checked_sub(1).and_then(|i| self.levels.get(i))
    }

    pub fn into_levels(self) -> Vec<GradeTriple> {
        self.levels
    }

    /// A copy with levels in canonical order.
    pub fn sorted(&self) -> GradeSequence {
        let mut levels = self.levels.clone();
        levels.sort_by(GradeTriple::level_order);
        GradeSequence { levels }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_refusal() {
        let g = GradeTriple::new(0.5, 0.2, 0.2).unwrap();
        assert!((g.refusal().get() - 0.1).abs() < 1e-12);
        assert_eq!(
            GradeTriple::new(0.0, 0.0, 0.0).unwrap().refusal().get(),
            1.0
        );
        assert_eq!(
            GradeTriple::new(0.4, 0.3, 0.3).unwrap().refusal().get(),
            0.0
        );
    }

    #[test]
    fn triple_rejects_bad_components() {
        assert!(matches!(
            GradeTriple::new(0.6, 0.3, 0.3),
            Err(PfmsError::SumExceedsOne { .. })
        ));
        assert!(matches!(
            GradeTriple::new(-0.1, 0.3, 0.3),
            Err(PfmsError::OutOfUnitInterval { name: "sigma", .. })
        ));
        assert!(matches!(
            GradeTriple::new(0.1, 1.5, 0.0),
            Err(PfmsError::OutOfUnitInterval { name: "tau", .. })
        ));
        assert!(matches!(
            GradeTriple::new(0.1, 0.1, f64::NAN),
            Err(PfmsError::OutOfUnitInterval { name: "eta", .. })
        ));
    }

    #[test]
    fn sum_tolerance_absorbs_rounding_only() {
        // 0.1 + 0.2 + 0.7 need not sum to exactly 1 in binary
        assert!(GradeTriple::new(0.1, 0.2, 0.7).is_ok());
        assert!(GradeTriple::new(0.5, 0.5, 1e-8).is_err());
    }

    #[test]
    fn unit_value_bounds() {
        assert!(UnitValue::new(0.0).is_ok());
        assert!(UnitValue::new(1.0).is_ok());
        assert!(UnitValue::new(1.0 + 1e-15).is_err());
        assert!(UnitValue::new(f64::INFINITY).is_err());
    }

    #[test]
    fn sequence_sigma_order() {
        assert!(GradeSequence::from_tuples(&[(0.7, 0.1, 0.1), (0.4, 0.2, 0.2)]).is_ok());
        assert_eq!(
            GradeSequence::from_tuples(&[(0.3, 0.1, 0.1), (0.5, 0.1, 0.1)]),
            Err(PfmsError::SigmaOrderViolation { point: 0, level: 1 })
        );
        assert_eq!(GradeSequence::new(vec![]), Err(PfmsError::EmptySequence));
    }

    #[test]
    fn sort_levels_tie_break() {
        let levels = vec![
            GradeTriple::new(0.3, 0.1, 0.4).unwrap(),
            GradeTriple::new(0.5, 0.1, 0.2).unwrap(),
            GradeTriple::new(0.3, 0.2, 0.5).unwrap(),
            GradeTriple::new(0.3, 0.2, 0.1).unwrap(),
        ];
        let sorted = GradeSequence::sort_levels(levels).unwrap();
        let got: Vec<[f64; 3]> = sorted.levels().iter().map(|g| g.to_array()).collect();
        assert_eq!(
            got,
            vec![
                [0.5, 0.1, 0.2],
                [0.3, 0.2, 0.1],
                [0.3, 0.2, 0.5],
                [0.3, 0.1, 0.4]
            ]
        );
    }
}

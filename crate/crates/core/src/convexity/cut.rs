//! `(r,s,t)`-cuts: the crisp region `{x : σ(x) ≥ r, τ(x) ≥ s, η(x) ≤ t}` at one
//! level, computed exactly for piecewise-linear channels.

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::grade::{Channel, UnitValue};
use crate::multiset::{DomainGrid, PictureFuzzyMultiset};
use crate::TOL_CMP;

/// Cut thresholds. The conventional side condition `r + s + t ≤ 1` is
/// reported by [`CutThresholds::is_conventional`] but not enforced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutThresholds {
    pub r: UnitValue,
    pub s: UnitValue,
    pub t: UnitValue,
}

impl CutThresholds {
    pub fn new(r: f64, s: f64, t: f64) -> Result<Self> {
        Ok(CutThresholds {
            r: UnitValue::named("r", r)?,
            s: UnitValue::named("s", s)?,
            t: UnitValue::named("t", t)?,
        })
    }

    pub fn is_conventional(&self) -> bool {
        self.r.get() + self.s.get() + self.t.get() <= 1.0
    }
}

/// A finite union of closed intervals, sorted, disjoint and non-adjacent.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CutRegion {
    intervals: Vec<(f64, f64)>,
}

impl Serialize for CutRegion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.intervals.iter().map(|&(a, b)| [a, b]).collect();
        pairs.serialize(serializer)
    }
}

impl CutRegion {
    pub fn empty() -> Self {
        CutRegion::default()
    }

    /// Normalizes arbitrary closed intervals: sorts and merges overlapping
    /// or touching pieces.
    pub fn from_intervals(mut intervals: Vec<(f64, f64)>) -> Self {
        intervals.retain(|&(a, b)| a <= b);
        intervals.sort_by(|p, q| p.0.total_cmp(&q.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        CutRegion { intervals: merged }
    }

    #[inline]
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// A subset of the line is convex iff it is a single interval (or empty).
    pub fn is_convex(&self) -> bool {
        self.intervals.len() <= 1
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|&(a, b)| a <= x && x <= b)
    }

    /// Smallest interval containing the region.
    pub fn span(&self) -> Option<(f64, f64)> {
        Some((self.intervals.first()?.0, self.intervals.last()?.1))
    }

    pub fn intersect(&self, other: &CutRegion) -> CutRegion {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a0, a1) = self.intervals[i];
            let (b0, b1) = other.intervals[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        CutRegion { intervals: out }
    }

    /// True if `self` is a subset of `other`.
    pub fn is_subset_of(&self, other: &CutRegion) -> bool {
        self.intervals
            .iter()
            .all(|&(a, b)| other.intervals.iter().any(|&(c, d)| c <= a && b <= d))
    }
}

/// `{x : f(x) ≥ threshold}` for the piecewise-linear `f` with node values
/// `values`.
fn superlevel(grid: &DomainGrid, values: &[f64], threshold: f64) -> CutRegion {
    let pts = grid.points();
    if pts.len() == 1 {
        return if values[0] >= threshold {
            CutRegion {
                intervals: vec![(pts[0], pts[0])],
            }
        } else {
            CutRegion::empty()
        };
    }
    let mut pieces = Vec::new();
    for j in 0..pts.len() - 1 {
        let (x0, x1) = (pts[j], pts[j + 1]);
        let (a, b) = (values[j], values[j + 1]);
        match (a >= threshold, b >= threshold) {
            (true, true) => pieces.push((x0, x1)),
            (false, false) => {}
            (a_in, _) => {
                let t = (threshold - a) / (b - a);
                let cross = (x0 + t * (x1 - x0)).clamp(x0, x1);
                pieces.push(if a_in { (x0, cross) } else { (cross, x1) });
            }
        }
    }
    CutRegion::from_intervals(pieces)
}

fn channel_region(
    d: &PictureFuzzyMultiset,
    k: usize,
    channel: Channel,
    threshold: f64,
) -> CutRegion {
    let values = d.channel_values_at(k, channel);
    if channel.is_upper() {
        superlevel(d.grid(), &values, threshold)
    } else {
        let negated: Vec<f64> = values.iter().map(|v| -v).collect();
        superlevel(d.grid(), &negated, -threshold)
    }
}

fn cut_raw(d: &PictureFuzzyMultiset, k: usize, r: f64, s: f64, t: f64) -> CutRegion {
    let sigma = channel_region(d, k, Channel::Positive, r);
    if sigma.is_empty() {
        return sigma;
    }
    let tau = channel_region(d, k, Channel::Neutral, s);
    let eta = channel_region(d, k, Channel::Negative, t);
    sigma.intersect(&tau).intersect(&eta)
}

/// The exact `(r,s,t)`-cut of level `level` (numbered from 1).
pub fn cut(d: &PictureFuzzyMultiset, thresholds: CutThresholds, level: usize) -> Result<CutRegion> {
    let k = d.check_level(level)?;
    Ok(cut_raw(
        d,
        k,
        thresholds.r.get(),
        thresholds.s.get(),
        thresholds.t.get(),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutsReport {
    pub convex: bool,
    /// Level and thresholds of the first disconnected cut found.
    pub level: Option<usize>,
    pub thresholds: Option<CutThresholds>,
    pub region: Option<CutRegion>,
}

/// Critical thresholds of one channel: its node values plus 0 and 1,
/// deduplicated and ascending.
fn critical_values(values: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = values.iter().copied().chain([0.0, 1.0]).collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// Checks that every `(r,s,t)`-cut at every level is an interval.
///
/// Thresholds are drawn from the critical set of each channel (node values
/// plus 0 and 1); between consecutive critical values the interval
/// structure of a piecewise-linear cut does not change. A multi-interval cut
/// is still accepted when its span lies inside the cut at thresholds relaxed
/// by [`TOL_CMP`], matching the tolerance of the exact checker.
pub fn cuts_all_convex(d: &PictureFuzzyMultiset) -> CutsReport {
    for k in 0..d.depth() {
        let rs = critical_values(&d.channel_values_at(k, Channel::Positive));
        let ss = critical_values(&d.channel_values_at(k, Channel::Neutral));
        let mut ts = critical_values(&d.channel_values_at(k, Channel::Negative));
        // η ≤ t is vacuous at t = 1; try the loosest negative threshold first.
        ts.reverse();
        for &r in &rs {
            let sigma = channel_region(d, k, Channel::Positive, r);
            if sigma.is_empty() {
                continue;
            }
            for &s in &ss {
                let sigma_tau = sigma.intersect(&channel_region(d, k, Channel::Neutral, s));
                if sigma_tau.is_empty() {
                    continue;
                }
                for &t in &ts {
                    let region = sigma_tau.intersect(&channel_region(d, k, Channel::Negative, t));
                    if region.is_convex() || within_tolerance(d, k, &region, r, s, t) {
                        continue;
                    }
                    return CutsReport {
                        convex: false,
                        level: Some(k + 1),
                        thresholds: Some(CutThresholds {
                            r: UnitValue::named("r", r).expect("critical value in [0,1]"),
                            s: UnitValue::named("s", s).expect("critical value in [0,1]"),
                            t: UnitValue::named("t", t).expect("critical value in [0,1]"),
                        }),
                        region: Some(region),
                    };
                }
            }
        }
    }
    CutsReport {
        convex: true,
        level: None,
        thresholds: None,
        region: None,
    }
}

fn within_tolerance(
    d: &PictureFuzzyMultiset,
    k: usize,
    region: &CutRegion,
    r: f64,
    s: f64,
    t: f64,
) -> bool {
    let Some(span) = region.span() else {
        return true;
    };
    let relaxed = cut_raw(d, k, r - TOL_CMP, s - TOL_CMP, t + TOL_CMP);
    CutRegion {
        intervals: vec![span],
    }
    .is_subset_of(&relaxed)
}

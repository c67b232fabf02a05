//! Picture fuzzy multisets over one-dimensional domains.
//!
//! A picture fuzzy multiset assigns every domain point a sequence of
//! `(positive, neutral, negative)` membership triples. This crate stores the
//! multiset on a finite grid and extends it to the whole interval by linear
//! interpolation, which makes convexity, `(r,s,t)`-cuts and convex hulls
//! exactly computable.
//!
//! - [`grade`] and [`multiset`]: validated grades and the multiset type.
//! - [`algebra`]: inclusion, union, intersection, complement and blends.
//! - [`convexity`]: exact and sampled convexity checks, cuts, the finite-point
//!   criterion and the channel-wise hull.
//! - [`lab`]: seeded instance generators, brute-force oracles and the
//!   property suites built on them.
//! - [`format`]: the JSON instance format.
//!
//! Levels are numbered from 1 throughout the public API.

pub mod algebra;
pub mod convexity;
pub mod error;
pub mod exec;
pub mod format;
pub mod grade;
pub mod lab;
pub mod multiset;

pub use algebra::{
    complement, convex_combination, equals, includes, intersection, pcc_points,
    segment_grade_blend, union, ChannelWeights, WeightVector,
};
pub use convexity::{
    convex_hull, cut, cuts_all_convex, is_convex_exact, is_convex_sampled, jensen_check,
    ConvexityReport, CutRegion, CutThresholds, GradeField,
};
pub use error::{PfmsError, Result};
pub use exec::Execution;
pub use grade::{Channel, GradeSequence, GradeTriple, UnitValue};
pub use multiset::{DomainGrid, PictureFuzzyMultiset};

/// Slack allowed on `σ + τ + η ≤ 1` and on weight sums.
pub const TOL_SUM: f64 = 1e-9;
/// Slack on every `≤`/`≥` comparison made by the checkers.
pub const TOL_CMP: f64 = 1e-9;
/// Coordinates closer than this are treated as duplicates.
pub const TOL_X: f64 = 1e-12;

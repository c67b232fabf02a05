//! The domain grid and the picture fuzzy multiset itself.
//!
//! A multiset stores one [`GradeSequence`] per grid node. Between nodes every
//! channel of every level is extended by linear interpolation, so the
//! multiset is a piecewise-linear function on `[x₁, x_m]`.

use serde::Serialize;

use crate::error::{PfmsError, Result};
use crate::grade::{Channel, GradeSequence, GradeTriple};
use crate::TOL_X;

/// Strictly increasing, finite domain coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DomainGrid {
    points: Vec<f64>,
}

impl DomainGrid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(PfmsError::EmptyGrid);
        }
        if let Some(index) = points.iter().position(|x| !x.is_finite()) {
            return Err(PfmsError::NonFiniteCoordinate { index });
        }
        for (index, pair) in points.windows(2).enumerate() {
            let gap = pair[1] - pair[0];
            if gap.abs() <= TOL_X {
                return Err(PfmsError::DuplicateCoordinate { index });
            }
            if gap < 0.0 {
                return Err(PfmsError::UnsortedGrid { index });
            }
        }
        Ok(DomainGrid { points })
    }

    #[inline]
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for API symmetry with `len`.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.points[0]
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo() - TOL_X && x <= self.hi() + TOL_X
    }

    pub(crate) fn check_contains(&self, x: f64) -> Result<f64> {
        if x.is_finite() && self.contains(x) {
            Ok(x.clamp(self.lo(), self.hi()))
        } else {
            Err(PfmsError::OutOfDomain {
                x,
                lo: self.lo(),
                hi: self.hi(),
            })
        }
    }

    /// Locates `x` (already clamped into the domain): either a node index, or
    /// the segment `[j, j + 1]` with the interpolation parameter in `(0, 1)`.
    pub(crate) fn locate(&self, x: f64) -> Location {
        let pts = &self.points;
        let j = pts.partition_point(|&p| p < x);
        if j < pts.len() && pts[j] == x {
            return Location::Node(j);
        }
        if j == 0 {
            return Location::Node(0);
        }
        if j == pts.len() {
            return Location::Node(pts.len() - 1);
        }
        let t = (x - pts[j - 1]) / (pts[j] - pts[j - 1]);
        Location::Segment(j - 1, t)
    }

    /// Coordinate-wise equality within [`TOL_X`].
    pub fn same_as(&self, other: &DomainGrid) -> bool {
        self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| (a - b).abs() <= TOL_X)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Location {
    Node(usize),
    Segment(usize, f64),
}

/// Linear interpolation `a + t (b − a)` kept inside `[min(a,b), max(a,b)]`;
/// exact when `a == b`.
#[inline]
pub(crate) fn lerp(a: f64, b: f64, t: f64) -> f64 {
    let v = a + t * (b - a);
    v.clamp(a.min(b), a.max(b))
}

/// Evaluates node values `values` (one per grid point) at `x`.
pub(crate) fn interpolate(grid: &DomainGrid, values: &[f64], x: f64) -> f64 {
    match grid.locate(x) {
        Location::Node(i) => values[i],
        Location::Segment(j, t) => lerp(values[j], values[j + 1], t),
    }
}

/// A picture fuzzy multiset on a 1-D grid, with uniform depth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PictureFuzzyMultiset {
    grid: DomainGrid,
    grades: Vec<GradeSequence>,
    depth: usize,
}

impl PictureFuzzyMultiset {
    /// Validates alignment, uniform depth and the per-point σ order.
    pub fn new(grid: DomainGrid, grades: Vec<GradeSequence>) -> Result<Self> {
        if grades.len() != grid.len() {
            return Err(PfmsError::LengthMismatch {
                expected: grid.len(),
                found: grades.len(),
            });
        }
        let depth = grades[0].depth();
        for (point, seq) in grades.iter().enumerate() {
            if seq.depth() != depth {
                return Err(PfmsError::RaggedDepth {
                    point,
                    expected: depth,
                    found: seq.depth(),
                });
            }
            GradeSequence::validate(seq.levels(), point)?;
        }
        Ok(PictureFuzzyMultiset {
            grid,
            grades,
            depth,
        })
    }

    /// Builds a multiset from raw coordinates and `[σ, τ, η]` rows, one row
    /// of `depth` triples per coordinate.
    pub fn from_rows(domain: Vec<f64>, rows: &[Vec<[f64; 3]>]) -> Result<Self> {
        let grid = DomainGrid::new(domain)?;
        let mut grades = Vec::with_capacity(rows.len());
        for (point, row) in rows.iter().enumerate() {
            let levels = row
                .iter()
                .map(|t| GradeTriple::new(t[0], t[1], t[2]))
                .collect::<Result<Vec<_>>>()?;
            GradeSequence::validate(&levels, point)?;
            grades.push(GradeSequence::from_levels_unchecked(levels));
        }
        Self::new(grid, grades)
    }

    /// Assembles a multiset from parts already known to satisfy every invariant.
    pub(crate) fn from_parts_unchecked(grid: DomainGrid, grades: Vec<GradeSequence>) -> Self {
        let depth = grades[0].depth();
        debug_assert!(grades.iter().all(|g| g.depth() == depth));
        PictureFuzzyMultiset {
            grid,
            grades,
            depth,
        }
    }

    #[inline]
    pub fn grid(&self) -> &DomainGrid {
        &self.grid
    }

    #[inline]
    pub fn grades(&self) -> &[GradeSequence] {
        &self.grades
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.depth
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    /// Always false: a valid grid has at least one point.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub(crate) fn check_level(&self, level: usize) -> Result<usize> {
        if level >= 1 && level <= self.depth {
            Ok(level - 1)
        } else {
            Err(PfmsError::BadLevel {
                level,
                depth: self.depth,
            })
        }
    }

    /// The stored triple at `node` and `level` (levels numbered from 1).
    pub fn node_grade(&self, node: usize, level: usize) -> Result<GradeTriple> {
        let k = self.check_level(level)?;
        self.grades
            .get(node)
            .map(|seq| seq.levels()[k])
            .ok_or(PfmsError::LengthMismatch {
                expected: self.len(),
                found: node,
            })
    }

    /// Node values of one channel at one level (levels numbered from 1).
    pub fn channel_values(&self, level: usize, channel: Channel) -> Result<Vec<f64>> {
        let k = self.check_level(level)?;
        Ok(self.channel_values_at(k, channel))
    }

    pub(crate) fn channel_values_at(&self, k: usize, channel: Channel) -> Vec<f64> {
        self.grades
            .iter()
            .map(|seq| seq.levels()[k].channel(channel))
            .collect()
    }

    /// The grade at domain coordinate `x` and level `level` (numbered from 1),
    /// linearly interpolated between the bracketing nodes.
    pub fn evaluate(&self, x: f64, level: usize) -> Result<GradeTriple> {
        let k = self.check_level(level)?;
        let x = self.grid.check_contains(x)?;
        Ok(self.evaluate_at(x, k))
    }

    /// `x` must already lie in the domain; `k` is zero-based.
    pub(crate) fn evaluate_at(&self, x: f64, k: usize) -> GradeTriple {
        match self.grid.locate(x) {
            Location::Node(i) => self.grades[i].levels()[k],
            Location::Segment(j, t) => {
                let a = self.grades[j].levels()[k];
                let b = self.grades[j + 1].levels()[k];
                GradeTriple::from_raw(
                    lerp(a.sigma(), b.sigma(), t),
                    lerp(a.tau(), b.tau(), t),
                    lerp(a.eta(), b.eta(), t),
                )
            }
        }
    }

    /// Extends every point to `depth` levels by appending `fill`.
    ///
    /// The default fill `(0, 0, 0)` (full refusal) models absent instances;
    /// `fill`'s σ must not exceed the current last level's σ anywhere.
    pub fn pad(&self, depth: usize, fill: GradeTriple) -> Result<Self> {
        if depth < self.depth {
            return Err(PfmsError::DepthMismatch {
                left: self.depth,
                right: depth,
            });
        }
        let grades = self
            .grades
            .iter()
            .map(|seq| {
                let mut levels = seq.levels().to_vec();
                levels.resize(depth, fill);
                GradeSequence::from_levels_unchecked(levels)
            })
            .collect();
        Self::new(self.grid.clone(), grades)
    }

    /// Drops grid node `node`. Requires at least two nodes.
    pub fn without_node(&self, node: usize) -> Option<Self> {
        if self.len() < 2 || node >= self.len() {
            return None;
        }
        let mut points = self.grid.points.clone();
        points.remove(node);
        let mut grades = self.grades.clone();
        grades.remove(node);
        Some(Self::from_parts_unchecked(DomainGrid { points }, grades))
    }

    /// Drops level `level` (numbered from 1) at every point. Requires depth ≥ 2.
    pub fn without_level(&self, level: usize) -> Option<Self> {
        if self.depth < 2 || level == 0 || level > self.depth {
            return None;
        }
        let grades = self
            .grades
            .iter()
            .map(|seq| {
                let mut levels = seq.levels().to_vec();
                levels.remove(level - 1);
                GradeSequence::from_levels_unchecked(levels)
            })
            .collect();
        Some(Self::from_parts_unchecked(self.grid.clone(), grades))
    }

    /// Keeps only level `level` (numbered from 1).
    pub fn single_level(&self, level: usize) -> Result<Self> {
        let k = self.check_level(level)?;
        let grades = self
            .grades
            .iter()
            .map(|seq| GradeSequence::from_levels_unchecked(vec![seq.levels()[k]]))
            .collect();
        Ok(Self::from_parts_unchecked(self.grid.clone(), grades))
    }

    /// Rows of `[σ, τ, η]` per node, the layout used by the JSON format.
    pub fn to_rows(&self) -> Vec<Vec<[f64; 3]>> {
        self.grades
            .iter()
            .map(|seq| seq.levels().iter().map(GradeTriple::to_array).collect())
            .collect()
    }
}

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PfmsError, Result};
use crate::grade::{GradeSequence, GradeTriple};
use crate::multiset::{DomainGrid, PictureFuzzyMultiset};

pub const MAX_GRID: usize = 64;
pub const MAX_DEPTH: usize = 8;

/// Resolution used when no value lattice is requested: grades are multiples
/// of 2⁻²⁰, so every nonzero difference dwarfs the comparison tolerance.
const FINE_UNITS: u32 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub grid_size: usize,
    pub depth: usize,
    /// Grade step, e.g. `0.05`; `1 / step` must be an integer.
    pub value_lattice: Option<f64>,
    /// `true`: σ, τ unimodal and η anti-unimodal at every level.
    /// `false`: unconstrained grades with a planted strict bump in η, so the
    /// instance is non-convex whenever `grid_size ≥ 3`.
    pub convex_only: bool,
}

impl GeneratorConfig {
    pub fn new(seed: u64, grid_size: usize, depth: usize, convex_only: bool) -> Self {
        GeneratorConfig {
            seed,
            grid_size,
            depth,
            value_lattice: None,
            convex_only,
        }
    }

    pub fn with_lattice(mut self, step: f64) -> Self {
        self.value_lattice = Some(step);
        self
    }

    fn lattice(&self) -> Result<Lattice> {
        match self.value_lattice {
            None => Ok(Lattice {
                units: FINE_UNITS,
                step: 1.0 / FINE_UNITS as f64,
            }),
            Some(step) => {
                let units = (1.0 / step).round();
                if !(step > 0.0 && step <= 1.0) || (units * step - 1.0).abs() > 1e-9 {
                    return Err(PfmsError::BadConfig(format!(
                        "value lattice step {step} does not divide 1"
                    )));
                }
                Ok(Lattice {
                    units: units as u32,
                    step,
                })
            }
        }
    }

    fn validate(&self) -> Result<Lattice> {
        if !(1..=MAX_GRID).contains(&self.grid_size) {
            return Err(PfmsError::BadConfig(format!(
                "grid_size {} outside 1..={MAX_GRID}",
                self.grid_size
            )));
        }
        if !(1..=MAX_DEPTH).contains(&self.depth) {
            return Err(PfmsError::BadConfig(format!(
                "depth {} outside 1..={MAX_DEPTH}",
                self.depth
            )));
        }
        self.lattice()
    }
}

#[derive(Debug, Clone, Copy)]
struct Lattice {
    units: u32,
    step: f64,
}

impl Lattice {
    fn value(&self, count: u32) -> f64 {
        count as f64 * self.step
    }
}

/// Per node, per level `[σ, τ, η]` in lattice units.
type Counts = Vec<Vec<[u32; 3]>>;

/// Generates a multiset from `cfg`. Identical configs give identical output.
pub fn gen_pfms(cfg: &GeneratorConfig) -> Result<PictureFuzzyMultiset> {
    let lattice = cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let grid = gen_grid(&mut rng, cfg.grid_size);
    Ok(gen_values(&mut rng, grid, cfg, lattice))
}

/// Like [`gen_pfms`] but on a caller-supplied grid (`cfg.grid_size` is ignored).
pub fn gen_pfms_on(grid: &DomainGrid, cfg: &GeneratorConfig) -> Result<PictureFuzzyMultiset> {
    let cfg = GeneratorConfig {
        grid_size: grid.len(),
        ..*cfg
    };
    let lattice = cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(gen_values(&mut rng, grid.clone(), &cfg, lattice))
}

/// Coordinates start at 0 with gaps drawn from `{0.5, 0.5625, …, 1.5}`.
pub(crate) fn gen_grid(rng: &mut impl Rng, size: usize) -> DomainGrid {
    let mut x = 0.0;
    let mut points = Vec::with_capacity(size);
    for _ in 0..size {
        points.push(x);
        x += 0.5 + rng.gen_range(0..=16) as f64 / 16.0;
    }
    DomainGrid::new(points).expect("increasing by construction")
}

fn gen_values(
    rng: &mut impl Rng,
    grid: DomainGrid,
    cfg: &GeneratorConfig,
    lattice: Lattice,
) -> PictureFuzzyMultiset {
    let m = grid.len();
    let counts = if cfg.convex_only {
        convex_counts(rng, m, cfg.depth, lattice.units)
    } else {
        let mut counts = random_counts(rng, m, cfg.depth, lattice.units);
        plant_bump(rng, &mut counts, lattice.units);
        counts
    };
    let grades = counts
        .into_iter()
        .map(|row| {
            let levels = row
                .into_iter()
                .map(|[s, t, e]| {
                    GradeTriple::new(lattice.value(s), lattice.value(t), lattice.value(e))
                        .expect("lattice counts sum to at most one")
                })
                .collect();
            GradeSequence::new(levels).expect("σ counts nonincreasing")
        })
        .collect();
    PictureFuzzyMultiset::new(grid, grades).expect("generator output is valid")
}

/// A unimodal sequence of length `m` with values in `0..=cap`: draw values,
/// put the largest at a random peak and place the rest outward in
/// decreasing order on randomly chosen sides.
fn unimodal(rng: &mut impl Rng, m: usize, cap: u32) -> Vec<u32> {
    let mut values: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=cap)).collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    let peak = rng.gen_range(0..m);
    let mut sides: Vec<bool> = (0..m - 1).map(|i| i < peak).collect();
    sides.shuffle(rng);
    let mut out = vec![0; m];
    out[peak] = values[0];
    let (mut left, mut right) = (peak, peak);
    for (&v, go_left) in values[1..].iter().zip(sides) {
        if go_left {
            left -= 1;
            out[left] = v;
        } else {
            right += 1;
            out[right] = v;
        }
    }
    out
}

/// Splits `units` into three channel budgets plus unused slack.
fn budgets(rng: &mut impl Rng, units: u32) -> [u32; 3] {
    let mut cuts = [
        rng.gen_range(0..=units),
        rng.gen_range(0..=units),
        rng.gen_range(0..=units),
    ];
    cuts.sort_unstable();
    let mut parts = [cuts[0], cuts[1] - cuts[0], cuts[2] - cuts[1]];
    parts.shuffle(rng);
    parts
}

/// Per level: σ = min(previous σ, fresh unimodal) so that σ stays
/// nonincreasing across levels (the pointwise min of unimodal sequences is
/// unimodal); τ unimodal; η = cap − unimodal. Channel caps sum to at most
/// `units`, so every triple is valid without rescaling.
fn convex_counts(rng: &mut impl Rng, m: usize, depth: usize, units: u32) -> Counts {
    let mut counts = vec![Vec::with_capacity(depth); m];
    let mut prev_sigma = vec![units; m];
    for _ in 0..depth {
        let [a, b, c] = budgets(rng, units);
        let fresh = unimodal(rng, m, a);
        let tau = unimodal(rng, m, b);
        let eta = unimodal(rng, m, c);
        for i in 0..m {
            let sigma = prev_sigma[i].min(fresh[i]);
            prev_sigma[i] = sigma;
            counts[i].push([sigma, tau[i], c - eta[i]]);
        }
    }
    counts
}

fn random_counts(rng: &mut impl Rng, m: usize, depth: usize, units: u32) -> Counts {
    (0..m)
        .map(|_| {
            let mut prev_sigma = units;
            (0..depth)
                .map(|_| {
                    let sigma = rng.gen_range(0..=prev_sigma);
                    prev_sigma = sigma;
                    let rest = units - sigma;
                    let first = rng.gen_range(0..=rest);
                    let second = rng.gen_range(0..=rest - first);
                    if rng.gen_bool(0.5) {
                        [sigma, first, second]
                    } else {
                        [sigma, second, first]
                    }
                })
                .collect()
        })
        .collect()
}

/// Sets an interior node of the deepest level to `(0, 0, 1)` and caps its
/// neighbours' η at one half, creating a strict bump in η of at least half a
/// unit. Only the deepest level is touched, so the σ order survives.
fn plant_bump(rng: &mut impl Rng, counts: &mut Counts, units: u32) {
    let m = counts.len();
    if m < 3 {
        return;
    }
    let last = counts[0].len() - 1;
    let i = rng.gen_range(1..m - 1);
    counts[i][last] = [0, 0, units];
    for j in [i - 1, i + 1] {
        let eta = &mut counts[j][last][2];
        *eta = (*eta).min(units / 2);
    }
}

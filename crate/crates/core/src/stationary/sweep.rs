//! Phase diagrams along a ray of linear-term vectors.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::points::{stationary_points, Stability, StationarySet};
use crate::correspondence::TwistingConfig;
use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Relative energy difference below which two stationary points count as
/// degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
const BISECTION_STEPS: usize = 100;
/// Transitions closer than this (relative) are reported as one critical value.
pub const MERGE_WIDTH: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSample {
    pub omega_mag: f64,
    pub set: StationarySet,
}

/// Qualitative content of the stationary set between two critical values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub extrema: usize,
    pub saddles: usize,
    pub marginal: usize,
    pub rings: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseInterval {
    pub lo: f64,
    pub hi: f64,
    pub signature: Signature,
    pub degenerate_extrema: bool,
    pub degenerate_saddles: bool,
}

impl PhaseInterval {
    /// Name of the zone in the transverse-field-free model: I to IV.
    pub fn zone(&self) -> &'static str {
        match (self.signature.saddles, self.degenerate_saddles) {
            (0, _) => "I",
            (1, _) => "II",
            (2, false) => "III",
            (2, true) => "IV",
            _ => "degenerate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseDiagram {
    pub base: TwistingConfig,
    pub direction: Vec3,
    pub big_j: f64,
    pub samples: Vec<SweepSample>,
    /// Magnitudes of the linear term at which the stationary set changes,
    /// sorted ascending.
    pub criticals: Vec<f64>,
    pub intervals: Vec<PhaseInterval>,
}

impl PhaseDiagram {
    /// Critical magnitudes in units of `J`.
    pub fn normalized_criticals(&self) -> Vec<f64> {
        self.criticals.iter().map(|c| c / self.big_j).collect()
    }
}

fn has_degenerate_pair(set: &StationarySet, pick: impl Fn(Stability) -> bool, scale: f64) -> bool {
    let e: Vec<f64> = set.points.iter().filter(|p| pick(p.stability)).map(|p| p.energy).collect();
    (0..e.len()).any(|a| (a + 1..e.len()).any(|b| (e[a] - e[b]).abs() <= DEGENERACY_TOL * scale))
}

struct Ray<'a> {
    base: &'a TwistingConfig,
    direction: Vec3,
    big_j: f64,
}

impl Ray<'_> {
    fn set(&self, mag: f64) -> Result<StationarySet> {
        stationary_points(&self.base.with_omega(self.direction * mag), self.big_j)
    }

    /// What changes at a critical value: the number of isolated points and
    /// of circles.
    fn counts(&self, mag: f64) -> Result<(usize, usize)> {
        let s = self.set(mag)?;
        Ok((s.points.len(), s.rings.len()))
    }

    fn energy_scale(&self, mag: f64) -> f64 {
        self.base.chi().amax() * self.big_j * self.big_j + mag * self.big_j
    }

    /// All transitions in `(lo, hi)` where the counts change, located by
    /// repeated bisection.
    fn transitions(&self, mut lo: f64, hi: f64, out: &mut Vec<f64>) -> Result<()> {
        let target = self.counts(hi)?;
        let mut guard = 0;
        loop {
            let start = self.counts(lo)?;
            if start == target || guard > 8 {
                return Ok(());
            }
            guard += 1;
            let (mut a, mut b) = (lo, hi);
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b || b - a <= 1e-13 * b.abs().max(1.0) {
                    break;
                }
                if self.counts(mid)? == start {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let c = 0.5 * (a + b);
            if out.last().is_none_or(|&last| (c - last).abs() > 1e-9 * c.abs().max(1.0)) {
                out.push(c);
            }
            lo = b;
            if lo >= hi {
                return Ok(());
            }
        }
    }
}

/// Stationary sets along `Omega = m * direction` for each magnitude `m` of
/// `grid`, the magnitudes at which the set changes, and a label for every
/// interval between them.
pub fn phase_sweep(
    base: &TwistingConfig,
    direction: &Vec3,
    grid: &[f64],
    big_j: f64,
) -> Result<PhaseDiagram> {
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidConfig("sweep grid must be sorted ascending".into()));
    }
    if grid.is_empty() {
        return Err(Error::InvalidConfig("empty sweep grid".into()));
    }
    if !(direction.norm() > 0.0) {
        return Err(Error::InvalidConfig("sweep direction must be nonzero".into()));
    }
    let direction = direction.normalize();
    let ray = Ray { base, direction, big_j };
    let samples: Vec<SweepSample> = grid
        .par_iter()
        .map(|&m| ray.set(m).map(|set| SweepSample { omega_mag: m, set }))
        .collect::<Result<_>>()?;

    let per_interval: Vec<Vec<f64>> = grid
        .par_windows(2)
        .map(|w| {
            let mut found = Vec::new();
            if w[1] > w[0] {
                ray.transitions(w[0], w[1], &mut found)?;
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;
    let mut raw: Vec<f64> = per_interval.into_iter().flatten().collect();
    raw.sort_by(f64::total_cmp);
    // a merging pair passes through a double root over a window far below
    // this width, which shows up as two adjacent transitions
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for c in raw {
        match clusters.last_mut() {
            Some(group) if c - group[group.len() - 1] <= MERGE_WIDTH * c.abs().max(1.0) => group.push(c),
            _ => clusters.push(vec![c]),
        }
    }
    let criticals: Vec<f64> =
        clusters.iter().map(|g| g.iter().sum::<f64>() / g.len() as f64).collect();

    let (first, last) = (grid[0], *grid.last().unwrap());
    let mut bounds = vec![first];
    bounds.extend(criticals.iter().copied().filter(|&c| c > first && c < last));
    bounds.push(last);
    let mut intervals = Vec::new();
    for w in bounds.windows(2) {
        if !(w[1] > w[0]) {
            continue;
        }
        let mid = 0.5 * (w[0] + w[1]);
        let set = ray.set(mid)?;
        let scale = ray.energy_scale(mid);
        intervals.push(PhaseInterval {
            lo: w[0],
            hi: w[1],
            signature: Signature {
                extrema: set.extrema(),
                saddles: set.saddles(),
                marginal: set.count(Stability::Marginal),
                rings: set.rings.len(),
            },
            degenerate_extrema: has_degenerate_pair(&set, |s| s == Stability::StableMin, scale)
                || has_degenerate_pair(&set, |s| s == Stability::StableMax, scale),
            degenerate_saddles: has_degenerate_pair(&set, |s| s == Stability::Saddle, scale),
        });
    }
    Ok(PhaseDiagram { base: *base, direction, big_j, samples, criticals, intervals })
}

/// `n` evenly spaced magnitudes from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

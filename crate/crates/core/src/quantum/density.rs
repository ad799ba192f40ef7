//! Level density of a finite spectrum and its singular points.
//!
//! The density at level `i` is `4 / (e[i+2] - e[i-2])`, the inverse mean
//! spacing over a five-level window. In the classical limit a saddle of
//! the energy on the sphere produces a peak, a local extremum a step, and
//! the global extrema the two ends of the support.

use serde::{Deserialize, Serialize};

use super::eigen::Spectrum;
use crate::error::{Error, Result};
use crate::stationary::{Stability, StationaryPoint};

/// A peak must rise above the lower of its two flanking minima (four
/// levels out) by this factor.
pub const PEAK_PROMINENCE: f64 = 1.1;
/// Minimum ratio between the mean densities two levels either side of a
/// step.
pub const STEP_RATIO: f64 = 1.25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelDensity {
    /// Energy of the window centre `e[i]`, `i = 2 ..= n - 2`.
    pub energies: Vec<f64>,
    pub density: Vec<f64>,
}

pub fn level_density(spectrum: &Spectrum) -> LevelDensity {
    let e = &spectrum.energies;
    if e.len() < 5 {
        return LevelDensity { energies: vec![], density: vec![] };
    }
    let floor = 1e-12 * (e[e.len() - 1] - e[0]).abs().max(f64::MIN_POSITIVE);
    let range = 2..e.len() - 2;
    LevelDensity {
        energies: range.clone().map(|i| e[i]).collect(),
        density: range.map(|i| 4.0 / (e[i + 2] - e[i - 2]).max(floor)).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularityKind {
    SupportEnd,
    Peak,
    Discontinuity,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub kind: SingularityKind,
    pub energy: f64,
    /// Index of the level the feature is centred on.
    pub level: usize,
    /// Log of the density contrast (zero for the support ends).
    pub strength: f64,
    /// Nearest classical stationary energy, if any were given.
    pub nearest_classical: Option<f64>,
    /// `|energy - nearest_classical|` over the spectral width.
    pub relative_offset: Option<f64>,
}

/// Nearest detected singularity to one classical stationary point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointMatch {
    pub energy: f64,
    pub stability: Stability,
    pub singularity: Singularity,
    /// Distance in units of the mean level spacing.
    pub offset_spacings: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub mean_spacing: f64,
    pub singularities: Vec<Singularity>,
    pub matches: Vec<PointMatch>,
}

impl SingularityReport {
    /// Largest distance from a classical energy to its nearest singularity,
    /// in mean spacings.
    pub fn worst_offset(&self) -> f64 {
        self.matches.iter().map(|m| m.offset_spacings).fold(0.0, f64::max)
    }
}

fn detect(spectrum: &Spectrum) -> Vec<Singularity> {
    let e = &spectrum.energies;
    let n = e.len();
    let found = |kind, level: usize, strength| Singularity {
        kind,
        energy: e[level],
        level,
        strength,
        nearest_classical: None,
        relative_offset: None,
    };
    let mut out = vec![found(SingularityKind::SupportEnd, 0, 0.0)];
    if n > 1 {
        out.push(found(SingularityKind::SupportEnd, n - 1, 0.0));
    }
    let ln: Vec<f64> = level_density(spectrum).density.iter().map(|r| r.ln()).collect();
    let m = ln.len();
    let min_of = |lo: usize, hi: usize| ln[lo..hi].iter().copied().fold(f64::INFINITY, f64::min);
    for k in 1..m.saturating_sub(1) {
        let lo = k.saturating_sub(3);
        let hi = (k + 4).min(m);
        // ties go to the lowest level
        if ln[lo..k].iter().any(|&x| x >= ln[k]) || ln[k + 1..hi].iter().any(|&x| x > ln[k]) {
            continue;
        }
        let flank = min_of(k.saturating_sub(4), k).max(min_of(k + 1, (k + 5).min(m)));
        let rise = ln[k] - flank;
        if rise > PEAK_PROMINENCE.ln() {
            out.push(found(SingularityKind::Peak, k + 2, rise));
        }
    }
    if m >= 5 {
        let step = |k: usize| 0.5 * (ln[k + 1] + ln[k + 2]) - 0.5 * (ln[k - 1] + ln[k - 2]);
        for k in 2..m - 2 {
            let s = step(k);
            let local = (k.saturating_sub(2).max(2)..(k + 3).min(m - 2)).all(|q| step(q).abs() <= s.abs());
            if local && s.abs() > STEP_RATIO.ln() {
                out.push(found(SingularityKind::Discontinuity, k + 2, s));
            }
        }
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    out
}

/// Singular points of the level density, each paired with the nearest
/// classical stationary energy, and for every classical point the nearest
/// singularity.
pub fn spectral_singularities(
    spectrum: &Spectrum,
    classical_points: &[StationaryPoint],
) -> Result<SingularityReport> {
    if spectrum.is_empty() {
        return Err(Error::InvalidConfig("empty spectrum".into()));
    }
    let e = &spectrum.energies;
    let width = e[e.len() - 1] - e[0];
    let mean_spacing = spectrum.mean_spacing();
    let mut singularities = detect(spectrum);
    for s in singularities.iter_mut() {
        if let Some(c) = classical_points
            .iter()
            .map(|p| p.energy)
            .min_by(|a, b| (a - s.energy).abs().total_cmp(&(b - s.energy).abs()))
        {
            s.nearest_classical = Some(c);
            s.relative_offset = (width > 0.0).then(|| (c - s.energy).abs() / width);
        }
    }
    let matches = classical_points
        .iter()
        .map(|p| {
            let nearest = *singularities
                .iter()
                .min_by(|a, b| (a.energy - p.energy).abs().total_cmp(&(b.energy - p.energy).abs()))
                .expect("support ends are always present");
            let gap = (nearest.energy - p.energy).abs();
            PointMatch {
                energy: p.energy,
                stability: p.stability,
                singularity: nearest,
                offset_spacings: if mean_spacing > 0.0 { gap / mean_spacing } else { f64::INFINITY },
            }
        })
        .collect();
    Ok(SingularityReport { mean_spacing, singularities, matches })
}

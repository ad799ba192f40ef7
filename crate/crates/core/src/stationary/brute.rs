//! Grid scan of the energy on the momentum sphere, used as an independent
//! check of the root-based solver.

use nalgebra::Rotation3;
use serde::{Deserialize, Serialize};

use super::points::EnergySurface;
use crate::error::{Error, Result};
use crate::geometry::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalType {
    Max,
    Min,
    Saddle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDetection {
    /// Unit vector of the cluster centroid.
    pub direction: Vec3,
    pub energy: f64,
    pub local_type: LocalType,
    /// Number of grid cells in the cluster.
    pub cells: usize,
}

pub const MIN_THETA: usize = 64;
pub const MIN_PHI: usize = 128;

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Local extrema and saddles of the energy on a `n_theta x n_phi`
/// latitude-longitude grid.
///
/// Cells near the grid poles are too distorted for a neighborhood test, so
/// the scan runs on two grids whose poles are a quarter turn apart. Each
/// grid reports only what it finds within [`BAND_LATITUDE`] of its own
/// equator, and detections of one type seen by both are merged. Both grids
/// are tilted away from the principal axes.
///
/// Adjacent flagged cells are merged into one detection. A continuous set
/// of stationary momenta (a circle) shows up as a single elongated cluster.
pub fn brute_force_stationary<S: EnergySurface + ?Sized>(
    surface: &S,
    big_j: f64,
    n_theta: usize,
    n_phi: usize,
) -> Result<Vec<GridDetection>> {
    if n_theta < MIN_THETA || n_phi < MIN_PHI {
        return Err(Error::InvalidConfig(format!(
            "grid {n_theta}x{n_phi} is below the minimum {MIN_THETA}x{MIN_PHI}"
        )));
    }
    let tilt = Rotation3::from_euler_angles(0.3141, 0.7071, 1.1547);
    let turned = tilt * Rotation3::from_euler_angles(0.0, std::f64::consts::FRAC_PI_2, 0.0);
    let band = BAND_LATITUDE.sin();
    let mut found: Vec<GridDetection> = Vec::new();
    for frame in [tilt, turned] {
        let pole = frame * Vec3::z();
        for d in scan(surface, big_j, n_theta, n_phi, &frame) {
            if d.direction.dot(&pole).abs() <= band {
                found.push(d);
            }
        }
    }
    let cell = std::f64::consts::PI / n_theta as f64;
    let mut merged: Vec<GridDetection> = Vec::new();
    for d in found {
        match merged.iter_mut().find(|m| {
            m.local_type == d.local_type && crate::geometry::angle_between(&m.direction, &d.direction) < 3.0 * cell
        }) {
            Some(m) => {
                let total = (m.cells + d.cells) as f64;
                m.direction = (m.direction * m.cells as f64 + d.direction * d.cells as f64).normalize();
                m.energy = (m.energy * m.cells as f64 + d.energy * d.cells as f64) / total;
                m.cells = m.cells.max(d.cells);
            }
            None => merged.push(d),
        }
    }
    Ok(merged)
}

/// Latitude range, measured from a grid's equator, in which that grid's
/// detections are trusted.
pub const BAND_LATITUDE: f64 = 50.0 * std::f64::consts::PI / 180.0;

fn scan<S: EnergySurface + ?Sized>(
    surface: &S,
    big_j: f64,
    n_theta: usize,
    n_phi: usize,
    tilt: &Rotation3<f64>,
) -> Vec<GridDetection> {
    let point = |it: usize, ip: usize| -> Vec3 {
        let theta = std::f64::consts::PI * (it as f64 + 0.5) / n_theta as f64;
        let phi = 2.0 * std::f64::consts::PI * ip as f64 / n_phi as f64;
        tilt * crate::geometry::direction(theta, phi)
    };
    let values: Vec<f64> = (0..n_theta * n_phi)
        .map(|idx| surface.energy(&(point(idx / n_phi, idx % n_phi) * big_j)))
        .collect();
    let at = |it: usize, ip: usize| values[it * n_phi + ip % n_phi];

    // longitude step that keeps the stencil roughly square near the poles
    let step: Vec<usize> = (0..n_theta)
        .map(|it| {
            let theta = std::f64::consts::PI * (it as f64 + 0.5) / n_theta as f64;
            let ratio = (n_phi as f64 / (2.0 * n_theta as f64)) / theta.sin();
            (ratio.round() as usize).clamp(1, n_phi / 8)
        })
        .collect();
    let ring_of = |it: usize, ip: usize| -> [f64; 8] {
        let s = step[it];
        let (left, right) = (ip + n_phi - s, ip + s);
        [
            at(it - 1, left),
            at(it - 1, ip),
            at(it - 1, right),
            at(it, right),
            at(it + 1, right),
            at(it + 1, ip),
            at(it + 1, left),
            at(it, left),
        ]
    };
    let mut flag: Vec<Option<LocalType>> = vec![None; values.len()];
    for it in 1..n_theta - 1 {
        for ip in 0..n_phi {
            let c = at(it, ip);
            let diffs = ring_of(it, ip).map(|v| v - c);
            if diffs.iter().all(|d| *d <= 0.0) && diffs.iter().any(|d| *d < 0.0) {
                flag[it * n_phi + ip] = Some(LocalType::Max);
            } else if diffs.iter().all(|d| *d >= 0.0) && diffs.iter().any(|d| *d > 0.0) {
                flag[it * n_phi + ip] = Some(LocalType::Min);
            }
        }
    }
    // saddles need four sign changes around the ring two cells out; a cell
    // next to an extremum can show that pattern from discretization alone
    let is_extremum = |f: &[Option<LocalType>], it: usize, ip: usize| {
        f[it * n_phi + ip % n_phi].is_some_and(|k| k != LocalType::Saddle)
    };
    let outer_ring = |it: usize, ip: usize| -> Vec<f64> {
        let s = step[it];
        let p = ip + 2 * n_phi;
        let mut ring = Vec::with_capacity(16);
        ring.extend((0..4).map(|k| at(it - 2, p - 2 * s + k * s)));
        ring.extend((0..4).map(|k| at(it - 2 + k, p + 2 * s)));
        ring.extend((0..4).map(|k| at(it + 2, p + 2 * s - k * s)));
        ring.extend((0..4).map(|k| at(it + 2 - k, p - 2 * s)));
        ring
    };
    for it in 2..n_theta - 2 {
        for ip in 0..n_phi {
            if flag[it * n_phi + ip].is_some() {
                continue;
            }
            let near_extremum = (it - 1..=it + 1)
                .any(|t| (ip + n_phi - 1..=ip + n_phi + 1).any(|p| is_extremum(&flag, t, p)));
            if near_extremum {
                continue;
            }
            let c = at(it, ip);
            let inner_changes = {
                let signs: Vec<bool> = ring_of(it, ip).iter().filter(|v| **v != c).map(|v| *v > c).collect();
                (0..signs.len()).filter(|&k| signs[k] != signs[(k + 1) % signs.len()]).count()
            };
            let outer_changes = {
                let signs: Vec<bool> = outer_ring(it, ip).iter().filter(|v| **v != c).map(|v| *v > c).collect();
                (0..signs.len()).filter(|&k| signs[k] != signs[(k + 1) % signs.len()]).count()
            };
            if inner_changes >= 4 && outer_changes >= 4 {
                flag[it * n_phi + ip] = Some(LocalType::Saddle);
            }
        }
    }

    // flagged cells of one type within two cells of each other form a cluster
    let mut parent: Vec<usize> = (0..values.len()).collect();
    for it in 1..n_theta - 1 {
        for ip in 0..n_phi {
            let here = it * n_phi + ip;
            let Some(kind) = flag[here] else { continue };
            for dt in 0..=2usize {
                let t = it + dt;
                if t >= n_theta {
                    continue;
                }
                let reach = 2 * step[it].max(step[t]);
                for dp in 0..=2 * reach {
                    if dt == 0 && dp <= reach {
                        continue;
                    }
                    let other = t * n_phi + (ip + n_phi + dp - reach) % n_phi;
                    if flag[other] == Some(kind) {
                        let (a, b) = (find(&mut parent, here), find(&mut parent, other));
                        parent[a] = b;
                    }
                }
            }
        }
    }

    let mut clusters: std::collections::BTreeMap<usize, (Vec3, f64, usize, LocalType)> =
        Default::default();
    for idx in 0..values.len() {
        let Some(kind) = flag[idx] else { continue };
        let root = find(&mut parent, idx);
        let entry = clusters.entry(root).or_insert((Vec3::zeros(), 0.0, 0, kind));
        entry.0 += point(idx / n_phi, idx % n_phi);
        entry.1 += values[idx];
        entry.2 += 1;
    }
    clusters
        .into_values()
        .map(|(sum, e, cells, local_type)| GridDetection {
            direction: sum.normalize(),
            energy: e / cells as f64,
            local_type,
            cells,
        })
        .collect()
}

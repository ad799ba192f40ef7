//! Periodic reshaping of a plate-like body with a perpendicular rotor.
//!
//! Shape A is the symmetric plate `I1 = 2 I0, I2 = I3 = I0`; shape B is the
//! coaxial plate `I1 = I2 = I0, I3 = 2 I0`. Both carry the rotor
//! `K = (0, 0, K3)`. Shape A has two stable momenta `J+-` mirrored in
//! `J1`; a dwell of the right length in shape B carries one onto the other,
//! so alternating the shapes produces a response at twice the drive period.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{body_energy, rk4_step, BodyState, InertiaConfig};
use crate::error::{Error, Result};

/// Default number of integration steps per drive period.
pub const STEPS_PER_PERIOD: f64 = 1e4;
/// A stroboscopic sample farther than this fraction of `|J+ - J-|` from
/// both stationary momenta counts as escaped.
pub const ESCAPE_FRACTION: f64 = 0.25;
/// Autocorrelation a lag must reach to count as the response period.
pub const PERIOD_CORRELATION: f64 = 0.8;
const MAX_LAG: usize = 16;

/// Dwell in shape B that turns `J+` into `J-`.
pub fn swap_time(i0: f64, k3: f64) -> Result<f64> {
    if !(i0 > 0.0 && i0.is_finite()) {
        return Err(Error::InvalidConfig(format!("I0 must be positive, got {i0}")));
    }
    if k3 == 0.0 || !k3.is_finite() {
        return Err(Error::UndefinedProtocol(format!("swap time needs K3 != 0, got {k3}")));
    }
    if k3 < 0.0 {
        return Err(Error::UndefinedProtocol(format!(
            "K3 = {k3} gives a negative dwell; flip the rotor orientation"
        )));
    }
    Ok(2.0 * std::f64::consts::PI * i0 / (3.0 * k3))
}

/// The two stable momenta of shape A, `(+-sqrt(J^2 - 4 K3^2), 0, 2 K3)`.
/// They merge at the pole when `J = 2|K3|`.
pub fn stationary_pair(i0: f64, k3: f64, big_j: f64) -> Result<(BodyState, BodyState)> {
    if !(i0 > 0.0 && i0.is_finite()) || !k3.is_finite() || !big_j.is_finite() {
        return Err(Error::InvalidConfig(format!("I0 = {i0}, K3 = {k3}, J = {big_j}")));
    }
    let threshold = 2.0 * k3.abs();
    if big_j < threshold {
        return Err(Error::NoBistability { big_j, threshold });
    }
    let j1 = (big_j * big_j - threshold * threshold).max(0.0).sqrt();
    Ok((BodyState::new(j1, 0.0, 2.0 * k3), BodyState::new(-j1, 0.0, 2.0 * k3)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    A,
    B,
}

impl Shape {
    pub fn tag(&self) -> &'static str {
        match self {
            Shape::A => "A",
            Shape::B => "B",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        match s {
            "A" => Some(Shape::A),
            "B" => Some(Shape::B),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloquetProtocol {
    pub shape_a: InertiaConfig,
    pub shape_b: InertiaConfig,
    pub tau0: f64,
    pub tau_swap: f64,
    /// Target step; each dwell is split into a whole number of equal steps
    /// no longer than this.
    pub dt: f64,
    /// Keep every `record_stride`-th step of the full trajectory (dwell
    /// ends are always kept).
    pub record_stride: usize,
    /// Project `J` back onto its initial sphere after every step.
    pub renormalize: bool,
}

impl FloquetProtocol {
    /// The plate protocol with shared `I0` and rotor `(0, 0, K3)`.
    pub fn plate(i0: f64, k3: f64, tau0: f64, tau_swap: f64) -> Result<Self> {
        let shape_a = InertiaConfig::formal([2.0 * i0, i0, i0], [0.0, 0.0, k3])?;
        let shape_b = InertiaConfig::formal([i0, i0, 2.0 * i0], [0.0, 0.0, k3])?;
        let p = Self {
            shape_a,
            shape_b,
            tau0,
            tau_swap,
            dt: (tau0 + tau_swap) / STEPS_PER_PERIOD,
            record_stride: 100,
            renormalize: false,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.shape_a.validate()?;
        self.shape_b.validate()?;
        if self.shape_a.rotor() != self.shape_b.rotor() {
            return Err(Error::UndefinedProtocol("shapes carry different rotors".into()));
        }
        for (name, v) in [("tau0", self.tau0), ("tau_swap", self.tau_swap), ("dt", self.dt)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::UndefinedProtocol(format!("{name} must be positive, got {v}")));
            }
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidConfig("record_stride must be at least 1".into()));
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        self.tau0 + self.tau_swap
    }

    fn dwells(&self) -> [(Shape, InertiaConfig, usize, f64); 2] {
        let split = |tau: f64| {
            let n = (tau / self.dt).ceil().max(1.0) as usize;
            (n, tau / n as f64)
        };
        let (na, ha) = split(self.tau0);
        let (nb, hb) = split(self.tau_swap);
        [(Shape::A, self.shape_a, na, ha), (Shape::B, self.shape_b, nb, hb)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloquetSample {
    pub t: f64,
    pub period: usize,
    pub shape: Shape,
    pub state: BodyState,
    /// Body energy under the shape in force at this instant.
    pub e_body: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StroboscopicRecord {
    /// `J` at `t = k (tau0 + tau_swap)`, starting with the initial state.
    pub samples: Vec<BodyState>,
    /// Response period in drive periods, if one dominates.
    pub period_multiple: Option<usize>,
    /// `period_multiple` times the drive period.
    pub subharmonic_period: Option<f64>,
    /// Consecutive stroboscopic samples whose `J1` keeps its sign.
    pub alternation_breaks: usize,
    pub escaped: bool,
    pub first_escape: Option<usize>,
    pub diverged: bool,
}

impl StroboscopicRecord {
    /// For each residue class modulo `m`, the largest `(J1, J2)` distance of
    /// its samples from their centroid.
    pub fn cluster_radii(&self, m: usize) -> Vec<f64> {
        (0..m.max(1))
            .map(|r| {
                let pts: Vec<(f64, f64)> = self
                    .samples
                    .iter()
                    .skip(r)
                    .step_by(m.max(1))
                    .map(|s| (s.0.x, s.0.y))
                    .collect();
                if pts.is_empty() {
                    return 0.0;
                }
                let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
                let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
                pts.iter().map(|p| (p.0 - cx).hypot(p.1 - cy)).fold(0.0, f64::max)
            })
            .collect()
    }
}

/// Smallest lag whose normalized autocorrelation of `x` (no mean removed)
/// reaches [`PERIOD_CORRELATION`].
pub fn dominant_period(x: &[f64]) -> Option<usize> {
    let power: f64 = x.iter().map(|v| v * v).sum::<f64>() / x.len().max(1) as f64;
    if x.len() < 3 || !(power > 0.0) {
        return None;
    }
    (1..=MAX_LAG.min(x.len() / 2)).find(|&lag| {
        let pairs = x.len() - lag;
        let c: f64 = (0..pairs).map(|k| x[k] * x[k + lag]).sum::<f64>() / pairs as f64;
        c / power >= PERIOD_CORRELATION
    })
}

/// Run `periods` drive periods from `initial`. Integration failure ends the
/// run early with the partial record flagged as escaped.
pub fn run_protocol(
    p: &FloquetProtocol,
    initial: &BodyState,
    periods: usize,
) -> Result<(Vec<FloquetSample>, StroboscopicRecord)> {
    p.validate()?;
    if periods == 0 {
        return Err(Error::InvalidConfig("periods must be at least 1".into()));
    }
    if !initial.is_finite() {
        return Err(Error::InvalidState(format!("initial state {:?}", initial.0)));
    }
    let radius = initial.norm();
    let dwells = p.dwells();
    let mut j = initial.0;
    let mut t = 0.0;
    let mut full = vec![FloquetSample {
        t,
        period: 0,
        shape: Shape::A,
        state: *initial,
        e_body: body_energy(initial, &p.shape_a),
    }];
    let mut strobe = vec![*initial];
    let mut diverged = false;
    'run: for period in 0..periods {
        for &(shape, cfg, n, h) in &dwells {
            for step in 1..=n {
                j = rk4_step(&j, &cfg, h);
                if p.renormalize {
                    let norm = j.norm();
                    if norm > 0.0 {
                        j *= radius / norm;
                    }
                }
                if !j.iter().all(|v| v.is_finite()) {
                    diverged = true;
                    break 'run;
                }
                t += h;
                if step % p.record_stride == 0 || step == n {
                    let state = BodyState(j);
                    full.push(FloquetSample { t, period, shape, state, e_body: body_energy(&state, &cfg) });
                }
            }
        }
        strobe.push(BodyState(j));
    }

    let j1: Vec<f64> = strobe.iter().map(|s| s.0.x).collect();
    let period_multiple = dominant_period(&j1);
    let alternation_breaks = j1.windows(2).filter(|w| w[0] * w[1] >= 0.0).count();
    let first_escape = match stationary_pair(1.0, p.shape_a.k3, radius) {
        Ok((plus, minus)) if plus.0 != minus.0 => {
            let limit = ESCAPE_FRACTION * (plus.0 - minus.0).norm();
            strobe.iter().skip(1).position(|s: &BodyState| {
                let d = (s.0 - plus.0).norm().min((s.0 - minus.0).norm());
                d > limit
            })
            .map(|k| k + 1)
        }
        _ => None,
    };
    let first_escape = first_escape.or(diverged.then_some(strobe.len()));
    let record = StroboscopicRecord {
        samples: strobe,
        period_multiple,
        subharmonic_period: period_multiple.map(|m| m as f64 * p.period()),
        alternation_breaks,
        escaped: first_escape.is_some(),
        first_escape,
        diverged,
    };
    Ok((full, record))
}

/// Stroboscopic records for each `tau0` in `grid`, other settings fixed.
pub fn scan_tau0(
    p: &FloquetProtocol,
    initial: &BodyState,
    periods: usize,
    grid: &[f64],
) -> Result<Vec<(f64, StroboscopicRecord)>> {
    grid.par_iter()
        .map(|&tau0| {
            let mut q = *p;
            q.tau0 = tau0;
            q.dt = p.dt.min(q.period() / STEPS_PER_PERIOD);
            q.record_stride = usize::MAX;
            run_protocol(&q, initial, periods).map(|(_, rec)| (tau0, rec))
        })
        .collect()
}

/// Norm of `J` in the stroboscopic record relative to the first sample,
/// largest deviation.
pub fn norm_drift(record: &StroboscopicRecord) -> f64 {
    let r0 = record.samples[0].norm();
    record.samples.iter().map(|s| (s.norm() - r0).abs() / r0).fold(0.0, f64::max)
}

//! Spin coherent states and their evolution under the twisting Hamiltonian.

use nalgebra::{DVector, Matrix2, Matrix3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::{eigensystem, Eigensystem};
use super::spin::{build_hamiltonian, spin_matrices, SpinMatrices};
use crate::correspondence::TwistingConfig;
use crate::error::{Error, Result};
use crate::geometry::{tangent_basis, VarianceEllipse, Vec3};

/// Normalized amplitudes in the Dicke basis (ascending `m`).
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    pub amplitudes: DVector<Complex64>,
}

impl QuantumState {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidState(format!("state norm {norm}")));
        }
        Ok(Self { amplitudes: amplitudes / Complex64::from(norm) })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn n(&self) -> u32 {
        (self.amplitudes.len() - 1) as u32
    }

    /// `<J>` and the symmetrized covariance `<{dJ_a, dJ_b}>/2`.
    pub fn moments(&self, s: &SpinMatrices) -> (Vec3, Matrix3<f64>) {
        let psi = &self.amplitudes;
        let applied: Vec<DVector<Complex64>> = (0..3).map(|k| s.component(k) * psi).collect();
        let mean = Vec3::from_fn(|k, _| psi.dotc(&applied[k]).re);
        let cov = Matrix3::from_fn(|a, b| applied[a].dotc(&applied[b]).re - mean[a] * mean[b]);
        (mean, cov)
    }
}

/// Binomial amplitude profile of the fully polarized state along
/// `(theta, phi)`; `theta = 0` is the `m = +j` Dicke state.
pub fn spin_coherent_state(theta: f64, phi: f64, n: u32) -> Result<QuantumState> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::InvalidState(format!("direction ({theta}, {phi})")));
    }
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let ln_fact = |k: u32| -> f64 { (1..=k).map(|i| (i as f64).ln()).sum() };
    let power = |x: f64, k: u32| -> f64 {
        if k == 0 {
            0.0
        } else if x == 0.0 {
            f64::NEG_INFINITY
        } else {
            k as f64 * x.abs().ln()
        }
    };
    let ln_n = ln_fact(n);
    // index a = j + m counts the up spins
    let amplitudes = DVector::from_fn(n as usize + 1, |a, _| {
        let up = a as u32;
        let down = n - up;
        let magnitude =
            (0.5 * (ln_n - ln_fact(up) - ln_fact(down)) + power(c, up) + power(s, down)).exp();
        let sign = if (c < 0.0 && up % 2 == 1) != (s < 0.0 && down % 2 == 1) { -1.0 } else { 1.0 };
        Complex64::from_polar(sign * magnitude, down as f64 * phi)
    });
    QuantumState::new(amplitudes)
}

/// Moments of the evolved state at one time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSample {
    pub t: f64,
    pub mean: Vec3,
    pub covariance: Matrix3<f64>,
    /// Covariance projected on the plane perpendicular to `mean`.
    pub ellipse: VarianceEllipse,
    pub norm: f64,
}

/// Exact evolution `|psi(t)> = exp(-i H t) |psi(0)>` through the
/// eigen-decomposition of `H`, recording first and second moments.
pub fn evolve_moments(
    state: &QuantumState,
    cfg: &TwistingConfig,
    times: &[f64],
) -> Result<Vec<MomentSample>> {
    let cfg = cfg.with_n(state.n());
    let es = eigensystem(cfg, &build_hamiltonian(&cfg), true)?;
    evolve_with(state, &es, times)
}

/// As [`evolve_moments`] with a precomputed eigensystem.
pub fn evolve_with(
    state: &QuantumState,
    es: &Eigensystem,
    times: &[f64],
) -> Result<Vec<MomentSample>> {
    let v = es
        .vectors
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("eigensystem was computed without vectors".into()))?;
    if v.nrows() != state.amplitudes.len() {
        return Err(Error::InvalidState(format!(
            "state dimension {} does not match Hamiltonian dimension {}",
            state.amplitudes.len(),
            v.nrows()
        )));
    }
    let s = spin_matrices(state.n());
    let overlaps = v.adjoint() * &state.amplitudes;
    let energies = &es.spectrum.energies;
    times
        .iter()
        .map(|&t| {
            if !t.is_finite() {
                return Err(Error::InvalidState(format!("time {t}")));
            }
            let rotated =
                DVector::from_fn(energies.len(), |k, _| overlaps[k] * Complex64::from_polar(1.0, -energies[k] * t));
            let psi = QuantumState { amplitudes: v * rotated };
            let (mean, covariance) = psi.moments(&s);
            let axis = if mean.norm() > 0.0 { mean.normalize() } else { Vec3::z() };
            let (u, w) = tangent_basis(&axis);
            let cu = covariance * u;
            let cw = covariance * w;
            let plane = Matrix2::new(u.dot(&cu), u.dot(&cw), w.dot(&cu), w.dot(&cw));
            Ok(MomentSample {
                t,
                mean,
                covariance,
                ellipse: VarianceEllipse::from_covariance(&plane),
                norm: psi.norm(),
            })
        })
        .collect()
}

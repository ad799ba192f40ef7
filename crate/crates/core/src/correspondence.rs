//! Two-way map between a rigid body with rotor and the quadratic
//! collective-spin Hamiltonian `H = sum_k chi_k J_k^2 + Omega_k J_k`.
//!
//! The dictionary is `chi_k = -1/(2 I_k)` and `Omega_k = K_k / I_k`. Both
//! sides carry a gauge freedom: a common shift of all `chi_k` (or of all
//! `1/I_k`) leaves the motion of `J` unchanged.

use serde::{Deserialize, Serialize};

use crate::dynamics::InertiaConfig;
use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Diagonal twisting tensor, linear frequencies and particle number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistingConfig {
    pub chi1: f64,
    pub chi2: f64,
    pub chi3: f64,
    #[serde(default)]
    pub omega1: f64,
    #[serde(default)]
    pub omega2: f64,
    #[serde(default)]
    pub omega3: f64,
    /// Particle number; the total spin is `n / 2`.
    #[serde(default)]
    pub n: u32,
}

impl TwistingConfig {
    pub fn new(chi: [f64; 3], omega: [f64; 3], n: u32) -> Self {
        Self {
            chi1: chi[0],
            chi2: chi[1],
            chi3: chi[2],
            omega1: omega[0],
            omega2: omega[1],
            omega3: omega[2],
            n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.chi1, self.chi2, self.chi3, self.omega1, self.omega2, self.omega3];
        if all.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("non-finite entry in {self:?}")))
        }
    }

    pub fn chi(&self) -> Vec3 {
        Vec3::new(self.chi1, self.chi2, self.chi3)
    }

    pub fn omega(&self) -> Vec3 {
        Vec3::new(self.omega1, self.omega2, self.omega3)
    }

    pub fn with_omega(mut self, omega: Vec3) -> Self {
        self.omega1 = omega.x;
        self.omega2 = omega.y;
        self.omega3 = omega.z;
        self
    }

    pub fn with_n(mut self, n: u32) -> Self {
        self.n = n;
        self
    }

    /// Total spin `j = n / 2`.
    pub fn spin(&self) -> f64 {
        0.5 * self.n as f64
    }

    /// Classical value of the Hamiltonian at `j`.
    pub fn energy(&self, j: &Vec3) -> f64 {
        let chi = self.chi();
        (0..3).map(|k| chi[k] * j[k] * j[k]).sum::<f64>() + self.omega().dot(j)
    }

    /// Gradient of the classical Hamiltonian.
    pub fn energy_gradient(&self, j: &Vec3) -> Vec3 {
        2.0 * self.chi().component_mul(j) + self.omega()
    }

    /// Heisenberg equations with symmetrized products replaced by classical
    /// ones: `dJ/dt = grad H x J`.
    pub fn vector_field(&self, j: &Vec3) -> Vec3 {
        self.energy_gradient(j).cross(j)
    }
}

/// Parameters of `H = eps J3 + V (J1^2 - J2^2) + W (J1^2 + J2^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LmgParams {
    pub epsilon: f64,
    pub v: f64,
    pub w: f64,
}

/// Gauge constants used when going from the quantum to the classical side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaugeChoice {
    /// Additive shift applied to every `chi_k`.
    pub chi0: f64,
    /// Moment used to repair the triangle inequality, if one was needed.
    pub i0: Option<f64>,
}

pub fn quantum_from_classical(cfg: &InertiaConfig) -> TwistingConfig {
    TwistingConfig::new(
        [-0.5 / cfg.i1, -0.5 / cfg.i2, -0.5 / cfg.i3],
        [cfg.k1 / cfg.i1, cfg.k2 / cfg.i2, cfg.k3 / cfg.i3],
        0,
    )
}

/// Upper end of the admissible `I0` interval when `I_big > I_a + I_b`.
pub fn triangle_repair_bound(i_big: f64, i_a: f64, i_b: f64) -> f64 {
    let excess = i_big - i_a - i_b;
    let p = i_a * i_b;
    (p + (p * p + i_big * p * excess).sqrt()) / excess
}

/// A realizable rigid body (with rotor) whose momentum dynamics equal those
/// of the given twisting Hamiltonian.
///
/// All `chi_k` are first shifted by `chi0 = -max(chi) - 1` so that every
/// moment is positive. If the resulting moments break the triangle
/// inequality they are repaired with `I0` at the midpoint of the admissible
/// interval.
pub fn classical_from_quantum(cfg: &TwistingConfig) -> (InertiaConfig, GaugeChoice) {
    let chi = cfg.chi();
    let chi0 = -chi.max() - 1.0;
    let shifted = chi.add_scalar(chi0);
    let moments = shifted.map(|c| -0.5 / c);
    let rotor = cfg.omega().component_mul(&moments);
    let raw = InertiaConfig {
        i1: moments.x,
        i2: moments.y,
        i3: moments.z,
        k1: rotor.x,
        k2: rotor.y,
        k3: rotor.z,
    };
    if raw.satisfies_triangle() {
        return (raw, GaugeChoice { chi0, i0: None });
    }
    let big = moments.imax();
    let (a, b) = ((big + 1) % 3, (big + 2) % 3);
    let i0 = 0.5 * triangle_repair_bound(moments[big], moments[a], moments[b]);
    let (repaired, _) =
        gauge_shift_classical(&raw, i0, 0.0).expect("positive i0 keeps moments positive");
    debug_assert!(repaired.satisfies_triangle());
    (repaired, GaugeChoice { chi0, i0: Some(i0) })
}

/// `chi_k -> chi_k + chi0`; the linear terms are untouched.
pub fn gauge_shift_quantum(cfg: &TwistingConfig, chi0: f64) -> TwistingConfig {
    TwistingConfig {
        chi1: cfg.chi1 + chi0,
        chi2: cfg.chi2 + chi0,
        chi3: cfg.chi3 + chi0,
        ..*cfg
    }
}

/// `1/I_k -> 1/I_k + 1/I0` with `K_k -> K_k / (1 + I_k/I0)`. Also returns
/// the resulting shift of the body energy at fixed `|J| = big_j`.
pub fn gauge_shift_classical(
    cfg: &InertiaConfig,
    i0: f64,
    big_j: f64,
) -> Result<(InertiaConfig, f64)> {
    if i0 == 0.0 || !i0.is_finite() {
        return Err(Error::InvalidGauge(format!("i0 must be finite and nonzero, got {i0}")));
    }
    let moments = cfg.moments();
    let shifted = moments.map(|i| 1.0 / (1.0 / i + 1.0 / i0));
    if shifted.iter().any(|&i| !(i > 0.0) || !i.is_finite()) {
        return Err(Error::InvalidGauge(format!(
            "i0 = {i0} makes a moment non-positive ({shifted:?})"
        )));
    }
    let rotor = cfg.rotor();
    let new_rotor = Vec3::from_fn(|k, _| rotor[k] / (1.0 + moments[k] / i0));
    let delta_e = big_j * big_j / (2.0 * i0)
        - (0..3).map(|k| rotor[k] * rotor[k] / (2.0 * (i0 + moments[k]))).sum::<f64>();
    Ok((
        InertiaConfig {
            i1: shifted.x,
            i2: shifted.y,
            i3: shifted.z,
            k1: new_rotor.x,
            k2: new_rotor.y,
            k3: new_rotor.z,
        },
        delta_e,
    ))
}

pub fn lmg_from_twisting(cfg: &TwistingConfig) -> Result<LmgParams> {
    if cfg.omega1 != 0.0 || cfg.omega2 != 0.0 {
        return Err(Error::NotLmg { omega1: cfg.omega1, omega2: cfg.omega2 });
    }
    Ok(LmgParams {
        epsilon: cfg.omega3,
        v: 0.5 * (cfg.chi1 - cfg.chi2),
        w: 0.5 * (cfg.chi1 + cfg.chi2) - cfg.chi3,
    })
}

/// Twisting form with `chi3 = 0`; the particle number is left at zero.
pub fn twisting_from_lmg(p: &LmgParams) -> TwistingConfig {
    TwistingConfig::new([p.w + p.v, p.w - p.v, 0.0], [0.0, 0.0, p.epsilon], 0)
}

/// Dynamical regime of the twist-and-turn Hamiltonian `chi J1^2 + Omega J3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Rabi,
    Josephson,
    Fock,
    Boundary,
}

pub const DEFAULT_REGIME_BAND: f64 = 0.01;

/// Rabi for `|Omega/chi| > N`, Fock for `|Omega/chi| < 1/N`, Josephson in
/// between. Ratios within the relative `band` of either threshold are
/// reported as `Boundary`. `chi = 0` is Rabi by convention.
pub fn classify_regime(chi: f64, omega: f64, n: u32, band: f64) -> Regime {
    if chi == 0.0 {
        return Regime::Rabi;
    }
    let ratio = (omega / chi).abs();
    let n = n.max(1) as f64;
    let (upper, lower) = (n, 1.0 / n);
    if (ratio - upper).abs() <= band * upper || (ratio - lower).abs() <= band * lower {
        Regime::Boundary
    } else if ratio > upper {
        Regime::Rabi
    } else if ratio < lower {
        Regime::Fock
    } else {
        Regime::Josephson
    }
}

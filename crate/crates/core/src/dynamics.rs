//! Euler equations for a rigid body carrying a rotor of fixed body-frame
//! angular momentum `K`.
//!
//! The state is the total angular momentum `J = L + K` in the body frame.
//! With `omega_k = L_k / I_k` the equations of motion collapse to
//! `dJ/dt = J x omega`, which conserves both `|J|^2` and the kinetic energy
//! of the body `E = sum_k L_k^2 / (2 I_k)`.

use nalgebra::Matrix2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{tangent_basis, Vec3, VarianceEllipse};

/// Principal moments of inertia and the body-frame rotor angular momentum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InertiaConfig {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    #[serde(default)]
    pub k1: f64,
    #[serde(default)]
    pub k2: f64,
    #[serde(default)]
    pub k3: f64,
}

impl InertiaConfig {
    /// A config that a real mass distribution can realize: positive moments
    /// obeying the triangle inequality.
    pub fn physical(moments: [f64; 3], rotor: [f64; 3]) -> Result<Self> {
        let cfg = Self::formal(moments, rotor)?;
        if !cfg.satisfies_triangle() {
            return Err(Error::InvalidConfig(format!(
                "moments {moments:?} violate the triangle inequality"
            )));
        }
        Ok(cfg)
    }

    /// Positive moments only; the triangle inequality is not checked.
    pub fn formal(moments: [f64; 3], rotor: [f64; 3]) -> Result<Self> {
        let cfg = Self {
            i1: moments[0],
            i2: moments[1],
            i3: moments[2],
            k1: rotor[0],
            k2: rotor[1],
            k3: rotor[2],
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Free body, no rotor.
    pub fn free(moments: [f64; 3]) -> Result<Self> {
        Self::formal(moments, [0.0; 3])
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.i1, self.i2, self.i3, self.k1, self.k2, self.k3];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite entry in {self:?}")));
        }
        if self.i1 <= 0.0 || self.i2 <= 0.0 || self.i3 <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "moments of inertia must be positive, got ({}, {}, {})",
                self.i1, self.i2, self.i3
            )));
        }
        Ok(())
    }

    pub fn satisfies_triangle(&self) -> bool {
        let [a, b, c] = [self.i1, self.i2, self.i3];
        let slack = 1e-12 * (a + b + c);
        a <= b + c + slack && b <= a + c + slack && c <= a + b + slack
    }

    pub fn moments(&self) -> Vec3 {
        Vec3::new(self.i1, self.i2, self.i3)
    }

    pub fn rotor(&self) -> Vec3 {
        Vec3::new(self.k1, self.k2, self.k3)
    }

    /// Angular velocity for total momentum `j`.
    pub fn omega(&self, j: &Vec3) -> Vec3 {
        (j - self.rotor()).component_div(&self.moments())
    }
}

/// Total angular momentum in the body frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodyState(pub Vec3);

impl BodyState {
    pub fn new(j1: f64, j2: f64, j3: f64) -> Self {
        Self(Vec3::new(j1, j2, j3))
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    fn check(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidState(format!("non-finite component in {:?}", self.0)))
        }
    }
}

impl From<Vec3> for BodyState {
    fn from(v: Vec3) -> Self {
        Self(v)
    }
}

fn field(j: &Vec3, cfg: &InertiaConfig) -> Vec3 {
    j.cross(&cfg.omega(j))
}

/// Time derivative of the total angular momentum.
pub fn djdt(state: &BodyState, cfg: &InertiaConfig) -> Result<Vec3> {
    state.check()?;
    cfg.validate()?;
    Ok(field(&state.0, cfg))
}

/// Body angular momentum `L = J - K` and angular velocity `omega`.
pub fn convert(state: &BodyState, cfg: &InertiaConfig) -> Result<(Vec3, Vec3)> {
    state.check()?;
    cfg.validate()?;
    let l = state.0 - cfg.rotor();
    Ok((l, l.component_div(&cfg.moments())))
}

/// Kinetic energy of the body, excluding the rotor.
pub fn body_energy(state: &BodyState, cfg: &InertiaConfig) -> f64 {
    let l = state.0 - cfg.rotor();
    0.5 * (l.x * l.x / cfg.i1 + l.y * l.y / cfg.i2 + l.z * l.z / cfg.i3)
}

/// Gradient of the body energy with respect to `J`; equal to `omega`.
pub fn energy_gradient(j: &Vec3, cfg: &InertiaConfig) -> Vec3 {
    cfg.omega(j)
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step(j: &Vec3, cfg: &InertiaConfig, dt: f64) -> Vec3 {
    let k1 = field(j, cfg);
    let k2 = field(&(j + 0.5 * dt * k1), cfg);
    let k3 = field(&(j + 0.5 * dt * k2), cfg);
    let k4 = field(&(j + dt * k3), cfg);
    j + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Rk4,
    Rk4Renormalized,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::Rk4Renormalized => "rk4-renormalized",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: BodyState,
    pub e_body: f64,
    pub j_sq: f64,
}

impl Sample {
    pub fn audit(t: f64, j: Vec3, cfg: &InertiaConfig) -> Self {
        let state = BodyState(j);
        Self {
            t,
            state,
            e_body: body_energy(&state, cfg),
            j_sq: j.norm_squared(),
        }
    }
}

/// Uniformly sampled solution of the equations of motion.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub dt: f64,
    pub method: Method,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory holds the initial sample")
    }

    /// Largest relative deviation of the energy and of `J^2` from their
    /// initial values.
    pub fn conservation_drift(&self) -> (f64, f64) {
        let first = self.samples[0];
        let e_scale = first.e_body.abs().max(f64::MIN_POSITIVE);
        let j_scale = first.j_sq.max(f64::MIN_POSITIVE);
        self.samples.iter().fold((0.0f64, 0.0f64), |(de, dj), s| {
            (
                de.max((s.e_body - first.e_body).abs() / e_scale),
                dj.max((s.j_sq - first.j_sq).abs() / j_scale),
            )
        })
    }

    /// Number of sign changes of component `axis` between consecutive
    /// samples (Dzhanibekov flips when `axis` is the intermediate axis).
    pub fn sign_flips(&self, axis: usize) -> usize {
        self.samples
            .windows(2)
            .filter(|w| w[0].state.0[axis] * w[1].state.0[axis] < 0.0)
            .count()
    }
}

/// Fixed-step RK4 integration of `n` steps from `initial`.
///
/// With `renormalize` each step is projected back onto the sphere of the
/// initial radius. The returned trajectory holds `n + 1` samples.
pub fn integrate(
    initial: &BodyState,
    cfg: &InertiaConfig,
    dt: f64,
    n: usize,
    renormalize: bool,
) -> Result<Trajectory> {
    initial.check()?;
    cfg.validate()?;
    if !(dt > 0.0 && dt.is_finite()) || n == 0 {
        return Err(Error::InvalidConfig(format!(
            "integration needs dt > 0 and n >= 1 (dt = {dt}, n = {n})"
        )));
    }
    let radius = initial.norm();
    let mut samples = Vec::with_capacity(n + 1);
    let mut j = initial.0;
    samples.push(Sample::audit(0.0, j, cfg));
    for step in 1..=n {
        j = rk4_step(&j, cfg, dt);
        if renormalize {
            let norm = j.norm();
            if norm > 0.0 {
                j *= radius / norm;
            }
        }
        if !j.iter().all(|v| v.is_finite()) {
            return Err(Error::IntegrationDiverged { last_valid: step - 1 });
        }
        samples.push(Sample::audit(step as f64 * dt, j, cfg));
    }
    Ok(Trajectory {
        samples,
        dt,
        method: if renormalize { Method::Rk4Renormalized } else { Method::Rk4 },
    })
}

/// Advance `j` by `n` RK4 steps without recording samples.
pub fn propagate(j: &Vec3, cfg: &InertiaConfig, dt: f64, n: usize) -> Result<Vec3> {
    let mut j = *j;
    for step in 0..n {
        j = rk4_step(&j, cfg, dt);
        if !j.iter().all(|v| v.is_finite()) {
            return Err(Error::IntegrationDiverged { last_valid: step });
        }
    }
    Ok(j)
}

/// Precession rate of the transverse momentum for a symmetric top with a
/// coaxial rotor.
pub fn precession_frequency(cfg: &InertiaConfig, j3: f64) -> Result<f64> {
    cfg.validate()?;
    let tol = 1e-12 * (cfg.i1 + cfg.i2);
    if (cfg.i1 - cfg.i2).abs() > tol {
        return Err(Error::NotApplicable(format!(
            "precession frequency needs i1 = i2 (got {} and {})",
            cfg.i1, cfg.i2
        )));
    }
    if cfg.k1 != 0.0 || cfg.k2 != 0.0 {
        return Err(Error::NotApplicable("rotor must be coaxial (k1 = k2 = 0)".into()));
    }
    Ok((1.0 / cfg.i1 - 1.0 / cfg.i3) * j3 + cfg.k3 / cfg.i3)
}

/// Exponential growth rate of small deviations from a stationary momentum,
/// from the linearized equations of motion in the tangent plane. Zero for
/// elliptic (stable) points.
pub fn linear_growth_rate(cfg: &InertiaConfig, stationary: &Vec3) -> f64 {
    let inv_i = cfg.moments().map(|v| 1.0 / v);
    let omega = cfg.omega(stationary);
    // d(J x omega)/dJ = [J]x diag(1/I) - [omega]x
    let jacobian = stationary.cross_matrix() * nalgebra::Matrix3::from_diagonal(&inv_i)
        - omega.cross_matrix();
    let (e1, e2) = tangent_basis(stationary);
    let b = Matrix2::new(
        e1.dot(&(jacobian * e1)),
        e1.dot(&(jacobian * e2)),
        e2.dot(&(jacobian * e1)),
        e2.dot(&(jacobian * e2)),
    );
    let lambda_sq = -b.determinant() + 0.25 * b.trace() * b.trace();
    lambda_sq.max(0.0).sqrt()
}

/// A ring of angular momenta of equal magnitude around a center direction.
#[derive(Clone, Debug)]
pub struct EnsembleCone {
    pub center: Vec3,
    pub half_angle: f64,
    pub samples: Vec<BodyState>,
}

impl EnsembleCone {
    /// `count` momenta of magnitude `big_j`, evenly spaced in azimuth on the
    /// cone of the given half-angle around `center`.
    pub fn ring(center: Vec3, big_j: f64, half_angle: f64, count: usize) -> Result<Self> {
        if center.norm() == 0.0 || !(big_j > 0.0) || count < 3 {
            return Err(Error::InvalidConfig(
                "ensemble needs a nonzero center, J > 0 and at least 3 samples".into(),
            ));
        }
        let c = center.normalize();
        let (e1, e2) = tangent_basis(&c);
        let samples = (0..count)
            .map(|k| {
                let phi = std::f64::consts::TAU * k as f64 / count as f64;
                let dir = c * half_angle.cos()
                    + (e1 * phi.cos() + e2 * phi.sin()) * half_angle.sin();
                BodyState(dir * big_j)
            })
            .collect();
        Ok(Self { center: c, half_angle, samples })
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }
}

/// Variance ellipse of an ensemble at one output time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsemblePoint {
    pub t: f64,
    pub ellipse: VarianceEllipse,
}

/// Angular spread of a set of momenta in the tangent plane of their mean
/// direction. Deviations are expressed as angle times tangent direction.
pub fn angular_spread(momenta: &[Vec3]) -> VarianceEllipse {
    let mean = momenta.iter().fold(Vec3::zeros(), |acc, j| acc + j.normalize());
    let center = mean.normalize();
    let (e1, e2) = tangent_basis(&center);
    let coords: Vec<(f64, f64)> = momenta
        .iter()
        .map(|j| {
            let u = j.normalize();
            let perp = u - center * u.dot(&center);
            let s = perp.norm();
            if s == 0.0 {
                return (0.0, 0.0);
            }
            let angle = s.atan2(u.dot(&center));
            let d = perp * (angle / s);
            (d.dot(&e1), d.dot(&e2))
        })
        .collect();
    let m = coords.len() as f64;
    let (mx, my) = coords.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (mx / m, my / m);
    let mut cov = Matrix2::zeros();
    for (x, y) in &coords {
        let (dx, dy) = (x - mx, y - my);
        cov[(0, 0)] += dx * dx;
        cov[(0, 1)] += dx * dy;
        cov[(1, 1)] += dy * dy;
    }
    cov[(1, 0)] = cov[(0, 1)];
    VarianceEllipse::from_covariance(&(cov / m))
}

/// Integrates every cone member and reports the angular variance ellipse
/// every `every` steps (including `t = 0`).
pub fn ensemble_squeeze(
    cone: &EnsembleCone,
    cfg: &InertiaConfig,
    dt: f64,
    n: usize,
    every: usize,
) -> Result<Vec<EnsemblePoint>> {
    if cone.half_angle > 0.2 {
        log::warn!(
            "cone half-angle {} rad exceeds 0.2; the tangent-plane ellipse is a poor description",
            cone.half_angle
        );
    }
    if !(dt > 0.0) || n == 0 || every == 0 {
        return Err(Error::InvalidConfig("ensemble needs dt > 0, n >= 1, every >= 1".into()));
    }
    cfg.validate()?;
    let outputs = n / every;
    // one column of snapshots per member, gathered in member order
    let columns: Vec<Vec<Vec3>> = cone
        .samples
        .par_iter()
        .map(|s| {
            let mut j = s.0;
            let mut column = Vec::with_capacity(outputs + 1);
            column.push(j);
            for _ in 0..outputs {
                j = propagate(&j, cfg, dt, every)?;
                column.push(j);
            }
            Ok(column)
        })
        .collect::<Result<_>>()?;
    Ok((0..=outputs)
        .map(|k| {
            let snapshot: Vec<Vec3> = columns.iter().map(|c| c[k]).collect();
            EnsemblePoint {
                t: (k * every) as f64 * dt,
                ellipse: angular_spread(&snapshot),
            }
        })
        .collect())
}

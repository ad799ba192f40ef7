//! Small helpers for directions on the angular-momentum sphere.

use nalgebra::{Matrix2, Vector3};
use serde::{Deserialize, Serialize};

pub type Vec3 = Vector3<f64>;

/// Orthonormal tangent basis `(e_theta, e_phi)` at the direction of `u`.
///
/// Spherical angles are measured from the third axis. At the poles the
/// azimuth is undefined and the first two axes are used instead.
pub fn tangent_basis(u: &Vec3) -> (Vec3, Vec3) {
    let n = u.normalize();
    let rho = (n.x * n.x + n.y * n.y).sqrt();
    if rho < 1e-12 {
        let s = n.z.signum();
        return (Vec3::new(s, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0));
    }
    let (cos_phi, sin_phi) = (n.x / rho, n.y / rho);
    let (cos_theta, sin_theta) = (n.z, rho);
    (
        Vec3::new(cos_theta * cos_phi, cos_theta * sin_phi, -sin_theta),
        Vec3::new(-sin_phi, cos_phi, 0.0),
    )
}

/// Polar and azimuthal angles of `u`.
pub fn angles(u: &Vec3) -> (f64, f64) {
    let n = u.normalize();
    (n.z.clamp(-1.0, 1.0).acos(), n.y.atan2(n.x))
}

/// Unit vector for polar angle `theta` and azimuth `phi`.
pub fn direction(theta: f64, phi: f64) -> Vec3 {
    Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

/// Angle between two directions, robust for nearly parallel inputs.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}

/// Principal axes of a 2x2 covariance: variances along the major and minor
/// axes and the tilt of the major axis from the first basis vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceEllipse {
    pub major: f64,
    pub minor: f64,
    pub tilt: f64,
}

impl VarianceEllipse {
    pub fn from_covariance(cov: &Matrix2<f64>) -> Self {
        let (a, b, d) = (cov[(0, 0)], 0.5 * (cov[(0, 1)] + cov[(1, 0)]), cov[(1, 1)]);
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        let tilt = 0.5 * (2.0 * b).atan2(a - d);
        Self {
            major: mean + half_gap,
            minor: (mean - half_gap).max(0.0),
            tilt,
        }
    }

    pub fn area(&self) -> f64 {
        (self.major * self.minor).sqrt()
    }

    pub fn aspect(&self) -> f64 {
        (self.major / self.minor).sqrt()
    }
}

//! Principal radii of curvature of a triaxial ellipsoid.

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Relative tolerance on the surface equation for input points.
pub const ON_SURFACE_TOL: f64 = 1e-9;

/// Principal radii `(r1, r2)`, `r1 >= r2 > 0`, of the ellipsoid
/// `(x/a)^2 + (y/b)^2 + (z/c)^2 = 1` at the surface point `(x, y, z)`.
///
/// Closed form in Cartesian coordinates: with
/// `s = x^2/a^4 + y^2/b^4 + z^2/c^4` and `t = a^2 + b^2 + c^2 - |p|^2`,
/// `R = 2 a^2 b^2 c^2 s^(3/2) / (t -+ sqrt(t^2 - 4 a^2 b^2 c^2 s))`.
pub fn ellipsoid_principal_radii(a: f64, b: f64, c: f64, x: f64, y: f64, z: f64) -> Result<(f64, f64)> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::InvalidPoint(x, y, z));
    }
    let level = (x / a).powi(2) + (y / b).powi(2) + (z / c).powi(2);
    if !((level - 1.0).abs() <= ON_SURFACE_TOL) {
        return Err(Error::InvalidPoint(x, y, z));
    }
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let s = x * x / (a2 * a2) + y * y / (b2 * b2) + z * z / (c2 * c2);
    let abc2 = a2 * b2 * c2;
    let t = a2 + b2 + c2 - (x * x + y * y + z * z);
    let disc = (t * t - 4.0 * abc2 * s).max(0.0).sqrt();
    // small radius from the + branch; the large one through the product
    // r1 r2 = 1 / gauss = abc2 s^2, which avoids cancellation in t - disc
    let small = 2.0 * abc2 * s.powf(1.5) / (t + disc);
    let large = 0.5 * (t + disc) * s.sqrt();
    Ok((large, small))
}

/// Axis-aligned ellipsoid with semi-axes `semi_axes` centred at `center`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ellipsoid {
    pub center: Vec3,
    pub semi_axes: Vec3,
}

impl Ellipsoid {
    pub fn radii_at(&self, p: &Vec3) -> Result<(f64, f64)> {
        let d = p - self.center;
        let s = self.semi_axes;
        ellipsoid_principal_radii(s.x, s.y, s.z, d.x, d.y, d.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere() {
        let r = 1.7;
        let p = Vec3::new(0.3, -0.8, 0.5).normalize() * r;
        let (r1, r2) = ellipsoid_principal_radii(r, r, r, p.x, p.y, p.z).unwrap();
        assert!((r1 - r).abs() < 1e-12 && (r2 - r).abs() < 1e-12);
    }

    #[test]
    fn vertex() {
        let (a, b, c) = (2.0, 0.7, 1.3);
        let (r1, r2) = ellipsoid_principal_radii(a, b, c, a, 0.0, 0.0).unwrap();
        assert!((r1 - c * c / a).abs() < 1e-12);
        assert!((r2 - b * b / a).abs() < 1e-12);
    }

    #[test]
    fn equator() {
        let (a, b, c) = (2.0, 0.7, 1.3);
        for phi in [0.1, 0.9, 2.0, 4.4] {
            let (x, y) = (a * f64::cos(phi), b * f64::sin(phi));
            let q = a * a * y * y / (b * b) + b * b * x * x / (a * a);
            let expected_1 = q.powf(1.5) / (a * b);
            let expected_2 = c * c / (a * b) * q.sqrt();
            let (r1, r2) = ellipsoid_principal_radii(a, b, c, x, y, 0.0).unwrap();
            let mut got = [r1, r2];
            let mut want = [expected_1, expected_2];
            got.sort_by(f64::total_cmp);
            want.sort_by(f64::total_cmp);
            for k in 0..2 {
                assert!((got[k] - want[k]).abs() < 1e-12 * want[k], "{got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn off_surface_point_is_rejected() {
        assert!(matches!(
            ellipsoid_principal_radii(1.0, 2.0, 3.0, 1.0, 1.0, 1.0),
            Err(Error::InvalidPoint(..))
        ));
    }
}

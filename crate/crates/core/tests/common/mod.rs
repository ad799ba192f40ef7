//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use eulertop::geometry::tangent_basis;
use eulertop::stationary::brute::{GridDetection, LocalType};
use eulertop::stationary::{Stability, StationarySet};
use eulertop::{TwistingConfig, Vec3};

/// Product of two coefficient vectors (lowest degree first).
pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n).map(|k| a.get(k).unwrap_or(&0.0) + b.get(k).unwrap_or(&0.0)).collect()
}

/// The sextic in `J3` obtained by substituting `J_k = Omega_k J3 / d_k` with
/// `d_k = Omega_3 - 2 (chi_k - chi_3) J3` into `|J|^2 = J^2`, cleared of
/// denominators and made monic.
pub fn sextic_by_expansion(q: &TwistingConfig, big_j: f64) -> [f64; 7] {
    let d1 = [q.omega3, -2.0 * (q.chi1 - q.chi3)];
    let d2 = [q.omega3, -2.0 * (q.chi2 - q.chi3)];
    let z2 = [0.0, 0.0, 1.0];
    let d1s = poly_mul(&d1, &d1);
    let d2s = poly_mul(&d2, &d2);
    let t1 = poly_mul(&poly_mul(&z2, &d2s), &[q.omega1 * q.omega1]);
    let t2 = poly_mul(&poly_mul(&z2, &d1s), &[q.omega2 * q.omega2]);
    let t3 = poly_mul(&poly_mul(&[-big_j * big_j, 0.0, 1.0], &d1s), &d2s);
    let sum = poly_add(&poly_add(&t1, &t2), &t3);
    let lead = sum[6];
    let mut out = [0.0; 7];
    for k in 0..7 {
        out[k] = sum[k] / lead;
    }
    out
}

/// Principal radii from second differences of the surface height over its
/// tangent plane at `p`, sampled by exact line-ellipsoid intersections.
pub fn radii_by_local_fit(semi: &Vec3, p: &Vec3) -> (f64, f64) {
    let inv2 = semi.map(|a| 1.0 / (a * a));
    let n = p.component_mul(&inv2).normalize();
    let (t1, t2) = tangent_basis(&n);
    let h = |u: f64, v: f64| -> f64 {
        let q = p + t1 * u + t2 * v;
        let a: f64 = (0..3).map(|k| n[k] * n[k] * inv2[k]).sum();
        let b: f64 = 2.0 * (0..3).map(|k| q[k] * n[k] * inv2[k]).sum::<f64>();
        let c: f64 = (0..3).map(|k| q[k] * q[k] * inv2[k]).sum::<f64>() - 1.0;
        -2.0 * c / (b + (b * b - 4.0 * a * c).sqrt())
    };
    let d = 1e-3 * semi.min();
    let h0 = h(0.0, 0.0);
    let huu = (h(d, 0.0) + h(-d, 0.0) - 2.0 * h0) / (d * d);
    let hvv = (h(0.0, d) + h(0.0, -d) - 2.0 * h0) / (d * d);
    let huv = (h(d, d) - h(d, -d) - h(-d, d) + h(-d, -d)) / (4.0 * d * d);
    let mean = 0.5 * (huu + hvv);
    let gap = (0.25 * (huu - hvv) * (huu - hvv) + huv * huv).sqrt();
    let (k1, k2) = ((mean - gap).abs(), (mean + gap).abs());
    let (r_a, r_b) = (1.0 / k1, 1.0 / k2);
    (r_a.max(r_b), r_a.min(r_b))
}

/// Outcome of comparing a solver result with a grid scan.
#[derive(Debug)]
pub struct Agreement {
    pub count_ok: bool,
    pub types_ok: bool,
    pub worst_angle: f64,
}

pub fn compare_with_grid(set: &StationarySet, grid: &[GridDetection], cell: f64) -> Agreement {
    let mut worst: f64 = 0.0;
    let mut types_ok = true;
    for d in grid {
        let best = set
            .points
            .iter()
            .min_by(|a, b| {
                let ta = eulertop::geometry::angle_between(&a.j.0, &d.direction);
                let tb = eulertop::geometry::angle_between(&b.j.0, &d.direction);
                ta.total_cmp(&tb)
            })
            .expect("solver returned no points");
        worst = worst.max(eulertop::geometry::angle_between(&best.j.0, &d.direction));
        let want = match d.local_type {
            LocalType::Max => Stability::StableMax,
            LocalType::Min => Stability::StableMin,
            LocalType::Saddle => Stability::Saddle,
        };
        types_ok &= best.stability == want;
    }
    Agreement { count_ok: grid.len() == set.points.len(), types_ok, worst_angle: worst / cell }
}

/// Smallest angle between two returned points.
pub fn min_separation(set: &StationarySet) -> f64 {
    let p = &set.points;
    let mut best = f64::INFINITY;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            best = best.min(eulertop::geometry::angle_between(&p[a].j.0, &p[b].j.0));
        }
    }
    best
}

/// Ratio of the smaller to the larger absolute eigenvalue of the energy
/// Hessian restricted to the sphere at a stationary momentum `j`.
pub fn tangent_conditioning(q: &TwistingConfig, j: &Vec3) -> f64 {
    let chi = q.chi();
    let grad = chi.component_mul(j) * 2.0 + q.omega();
    let mu = grad.dot(j) / j.norm_squared();
    let (t1, t2) = tangent_basis(&j.normalize());
    let h = |a: &Vec3, b: &Vec3| (0..3).map(|k| a[k] * b[k] * (2.0 * chi[k] - mu)).sum::<f64>();
    let (a, b, d) = (h(&t1, &t1), h(&t1, &t2), h(&t2, &t2));
    let mean = 0.5 * (a + d);
    let gap = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let (l1, l2) = ((mean - gap).abs(), (mean + gap).abs());
    l1.min(l2) / l1.max(l2)
}

/// Smallest tangent conditioning the 8-neighbor stencil resolves: the
/// rising sectors of a saddle have half-width `atan(sqrt(c))`, which must
/// exceed half the 45 degree stencil spacing.
pub const MIN_RESOLVABLE_CONDITIONING: f64 = 0.2;

/// Whether a grid scan can be expected to see the stationary set of `q`
/// point by point: no circles or marginal points, every point well
/// conditioned, and the point count unchanged when the linear term is
/// scaled by five percent either way.
pub fn grid_resolvable(q: &TwistingConfig, big_j: f64) -> bool {
    let Ok(set) = eulertop::stationary::stationary_points(q, big_j) else { return false };
    if !set.rings.is_empty() || set.points.iter().any(|p| p.stability == Stability::Marginal) {
        return false;
    }
    if set.points.iter().any(|p| tangent_conditioning(q, &p.j.0) < MIN_RESOLVABLE_CONDITIONING) {
        return false;
    }
    [0.95, 1.05].iter().all(|s| {
        eulertop::stationary::stationary_points(&q.with_omega(q.omega() * *s), big_j)
            .is_ok_and(|other| other.points.len() == set.points.len())
    })
}

//! Stationary momenta, their stability and phase diagrams.

pub mod brute;
pub mod curvature;
pub mod points;
pub mod poly;
pub mod sweep;

pub use curvature::{ellipsoid_principal_radii, Ellipsoid};
pub use points::{
    classify_stability, lmg_stationary_energies, stationary_points, Branch, DegenerateRing,
    EnergySurface, LmgLevel, Stability, StationaryPoint, StationarySet,
};
pub use poly::{poly_coeffs_classical, poly_coeffs_quantum, real_roots, Degree6Poly, Root};

//! Euler top with an internal rotor and its collective-spin counterpart.
//!
//! The classical body (principal moments `I_k`, rotor momentum `K`) and the
//! quadratic spin Hamiltonian `H = sum_k chi_k J_k^2 + Omega_k J_k` share
//! the same equations of motion for the angular momentum `J`. The crate
//! integrates the classical motion, maps parameters between the two
//! pictures, locates and classifies stationary momenta, diagonalizes the
//! quantum Hamiltonian in the Dicke basis and runs the periodic reshaping
//! protocol that yields a period-doubled response.

pub mod correspondence;
pub mod dynamics;
pub mod error;
pub mod floquet;
pub mod geometry;
pub mod io;
pub mod quantum;
pub mod stationary;

pub use correspondence::{LmgParams, Regime, TwistingConfig};
pub use dynamics::{BodyState, InertiaConfig, Trajectory};
pub use error::{Error, Result};
pub use geometry::Vec3;

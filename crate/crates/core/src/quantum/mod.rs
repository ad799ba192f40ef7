//! Collective-spin side: the twisting Hamiltonian in the Dicke basis, its
//! spectrum, level-density singularities and coherent-state dynamics.

pub mod density;
pub mod eigen;
pub mod spin;
pub mod state;

use rayon::prelude::*;

pub use density::{level_density, spectral_singularities, LevelDensity, PointMatch, Singularity, SingularityKind, SingularityReport};
pub use eigen::{eigensystem, jacobi_symmetric, Eigensystem, Spectrum};
pub use spin::{build_hamiltonian, spin_matrices, CMatrix, SpinMatrices};
pub use state::{evolve_moments, evolve_with, spin_coherent_state, MomentSample, QuantumState};

use crate::correspondence::TwistingConfig;
use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// Eigenvalues of `H` for one parameter point.
pub fn spectrum(cfg: &TwistingConfig) -> Result<Spectrum> {
    Ok(eigensystem(*cfg, &build_hamiltonian(cfg), false)?.spectrum)
}

/// Spectra along `Omega = m * direction` for every magnitude `m` in `grid`.
pub fn spectrum_sweep(base: &TwistingConfig, direction: &Vec3, grid: &[f64]) -> Result<Vec<Spectrum>> {
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidConfig("sweep grid must be sorted ascending".into()));
    }
    if !(direction.norm() > 0.0) {
        return Err(Error::InvalidConfig("sweep direction must be nonzero".into()));
    }
    let u = direction.normalize();
    grid.par_iter().map(|&m| spectrum(&base.with_omega(u * m))).collect()
}

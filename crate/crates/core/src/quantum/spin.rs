//! Angular momentum matrices in the Dicke basis.
//!
//! Basis index `a` holds `m = -j + a`, so `J3` is diagonal with ascending
//! entries `-j, ..., j`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correspondence::TwistingConfig;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinMatrices {
    pub n: u32,
    pub j: f64,
    pub j1: CMatrix,
    pub j2: CMatrix,
    pub j3: CMatrix,
}

impl SpinMatrices {
    pub fn dim(&self) -> usize {
        self.n as usize + 1
    }

    /// `J_k` for `k` in `0..3`.
    pub fn component(&self, k: usize) -> &CMatrix {
        match k {
            0 => &self.j1,
            1 => &self.j2,
            _ => &self.j3,
        }
    }

    /// `m` of basis state `a`.
    pub fn m(&self, a: usize) -> f64 {
        a as f64 - self.j
    }
}

/// `<m+1| J+ |m>` for `m = -j + a`.
fn raising(j: f64, a: usize) -> f64 {
    let m = a as f64 - j;
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// Spin-`n/2` matrices from the ladder operators. `n = 0` gives 1x1 zeros.
pub fn spin_matrices(n: u32) -> SpinMatrices {
    let dim = n as usize + 1;
    let j = 0.5 * n as f64;
    let mut j1 = CMatrix::zeros(dim, dim);
    let mut j2 = CMatrix::zeros(dim, dim);
    let mut j3 = CMatrix::zeros(dim, dim);
    for a in 0..dim {
        j3[(a, a)] = Complex64::new(a as f64 - j, 0.0);
        if a + 1 < dim {
            let up = 0.5 * raising(j, a);
            // J1 = (J+ + J-)/2, J2 = (J+ - J-)/(2i)
            j1[(a + 1, a)] = Complex64::new(up, 0.0);
            j1[(a, a + 1)] = Complex64::new(up, 0.0);
            j2[(a + 1, a)] = Complex64::new(0.0, -up);
            j2[(a, a + 1)] = Complex64::new(0.0, up);
        }
    }
    SpinMatrices { n, j, j1, j2, j3 }
}

/// `H = sum_k chi_k J_k^2 + Omega_k J_k` for spin `cfg.n / 2`.
///
/// Entries are filled from the ladder algebra, so the result is exactly
/// Hermitian, pentadiagonal, and real whenever `Omega2 = 0`.
pub fn build_hamiltonian(cfg: &TwistingConfig) -> CMatrix {
    let dim = cfg.n as usize + 1;
    let j = cfg.spin();
    let (c1, c2, c3) = (cfg.chi1, cfg.chi2, cfg.chi3);
    let mut h = CMatrix::zeros(dim, dim);
    for a in 0..dim {
        let m = a as f64 - j;
        // J1^2 + J2^2 = J^2 - J3^2 on the diagonal; split with weights
        let up = raising(j, a);
        let down = if a > 0 { raising(j, a - 1) } else { 0.0 };
        let perp = 0.25 * (up * up + down * down);
        h[(a, a)] = Complex64::new((c1 + c2) * perp + c3 * m * m + cfg.omega3 * m, 0.0);
        if a + 1 < dim {
            // <m+1| J1 |m> = up/2, <m+1| J2 |m> = -i up/2
            let v = Complex64::new(0.5 * cfg.omega1 * up, -0.5 * cfg.omega2 * up);
            h[(a + 1, a)] = v;
            h[(a, a + 1)] = v.conj();
        }
        if a + 2 < dim {
            // <m+2| J1^2 |m> = up(m) up(m+1)/4 and <m+2| J2^2 |m> = -that
            let v = 0.25 * (c1 - c2) * up * raising(j, a + 1);
            h[(a + 2, a)] = Complex64::new(v, 0.0);
            h[(a, a + 2)] = Complex64::new(v, 0.0);
        }
    }
    h
}

/// Largest `|H_ab - conj(H_ba)|`.
pub fn hermiticity_defect(h: &CMatrix) -> f64 {
    let n = h.nrows();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in a..n {
            worst = worst.max((h[(a, b)] - h[(b, a)].conj()).norm());
        }
    }
    worst
}

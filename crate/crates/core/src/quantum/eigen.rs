//! Dense Hermitian eigensolver: cyclic Jacobi rotations on a real
//! symmetric matrix, with complex input handled through the embedding
//! `[[A, -B], [B, A]]` of `H = A + iB`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::spin::{hermiticity_defect, CMatrix};
use crate::correspondence::TwistingConfig;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
/// Sweeps stop once the off-diagonal Frobenius norm drops below this
/// fraction of the full norm.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Relative level gap below which eigenvalues share a degeneracy group.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Eigenvalues (ascending) and matching orthonormal eigenvectors as
/// columns of `vectors`.
pub fn jacobi_symmetric(a: &DMatrix<f64>, want_vectors: bool) -> (Vec<f64>, Option<DMatrix<f64>>) {
    let n = a.nrows();
    let mut a = a.clone();
    let mut v = want_vectors.then(|| DMatrix::<f64>::identity(n, n));
    let total = a.norm();
    let off = |a: &DMatrix<f64>| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[(p, q)] * a[(p, q)];
                }
            }
        }
        s.sqrt()
    };
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= OFF_DIAGONAL_TOL * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[(x, x)].total_cmp(&a[(y, y)]));
    let values = order.iter().map(|&k| a[(k, k)]).collect();
    let vectors = v.map(|v| DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]));
    (values, vectors)
}

/// Sorted eigenvalues of one Hamiltonian with their degeneracy groups.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub config: TwistingConfig,
    pub energies: Vec<f64>,
    /// Runs of consecutive level indices closer than the degeneracy
    /// tolerance; singletons are omitted.
    pub degeneracy_groups: Vec<Vec<usize>>,
}

impl Spectrum {
    pub fn new(config: TwistingConfig, energies: Vec<f64>) -> Self {
        let scale = energies.iter().fold(1.0f64, |m, e| m.max(e.abs()));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut run = vec![0];
        for i in 1..energies.len() {
            if energies[i] - energies[i - 1] <= DEGENERACY_TOL * scale {
                run.push(i);
            } else {
                if run.len() > 1 {
                    groups.push(run);
                }
                run = vec![i];
            }
        }
        if run.len() > 1 {
            groups.push(run);
        }
        Self { config, energies, degeneracy_groups: groups }
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Width of the spectrum divided by the number of gaps.
    pub fn mean_spacing(&self) -> f64 {
        match self.energies.len() {
            0 | 1 => 0.0,
            n => (self.energies[n - 1] - self.energies[0]) / (n - 1) as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigensystem {
    pub spectrum: Spectrum,
    /// Orthonormal eigenvectors as columns, in the order of the energies.
    pub vectors: Option<CMatrix>,
}

/// Complex unit vectors spanning the complex eigenspace behind one cluster
/// of doubled real eigenvectors `(x, y) -> x + iy`.
fn complex_span(real: &DMatrix<f64>, cols: &[usize], keep: usize) -> Vec<DVector<Complex64>> {
    let half = real.nrows() / 2;
    let mut pool: Vec<DVector<Complex64>> = cols
        .iter()
        .map(|&c| DVector::from_fn(half, |r, _| Complex64::new(real[(r, c)], real[(r + half, c)])))
        .collect();
    let mut kept: Vec<DVector<Complex64>> = Vec::with_capacity(keep);
    while kept.len() < keep {
        let (best, _) = pool
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("cluster holds twice as many real vectors as complex ones");
        let chosen = pool.swap_remove(best);
        let chosen = &chosen / Complex64::from(chosen.norm());
        for v in pool.iter_mut() {
            let overlap = chosen.dotc(v);
            *v -= &chosen * overlap;
        }
        kept.push(chosen);
    }
    kept
}

/// Full spectrum of a Hermitian matrix, optionally with eigenvectors.
pub fn eigensystem(config: TwistingConfig, h: &CMatrix, want_vectors: bool) -> Result<Eigensystem> {
    let n = h.nrows();
    if h.ncols() != n {
        return Err(Error::InvalidConfig(format!("matrix is {}x{}", n, h.ncols())));
    }
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let deviation = hermiticity_defect(h);
    if deviation > 1e-12 * scale.max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    if h.iter().all(|z| z.im == 0.0) {
        let a = DMatrix::from_fn(n, n, |r, c| 0.5 * (h[(r, c)].re + h[(c, r)].re));
        let (values, vectors) = jacobi_symmetric(&a, want_vectors);
        let vectors = vectors.map(|v| v.map(Complex64::from));
        return Ok(Eigensystem { spectrum: Spectrum::new(config, values), vectors });
    }
    let embed = DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let (rr, cc) = (r % n, c % n);
        let re = 0.5 * (h[(rr, cc)].re + h[(cc, rr)].re);
        let im = 0.5 * (h[(rr, cc)].im - h[(cc, rr)].im);
        match (r < n, c < n) {
            (true, true) | (false, false) => re,
            (true, false) => -im,
            (false, true) => im,
        }
    });
    let (doubled, real_vectors) = jacobi_symmetric(&embed, want_vectors);
    let values: Vec<f64> = doubled.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    let vectors = real_vectors.map(|rv| {
        let spectrum = Spectrum::new(config, values.clone());
        let mut columns: Vec<DVector<Complex64>> = Vec::with_capacity(n);
        let mut level = 0;
        while level < n {
            let group_len = spectrum
                .degeneracy_groups
                .iter()
                .find(|g| g[0] == level)
                .map_or(1, |g| g.len());
            let cols: Vec<usize> = (2 * level..2 * (level + group_len)).collect();
            columns.extend(complex_span(&rv, &cols, group_len));
            level += group_len;
        }
        CMatrix::from_columns(&columns)
    });
    Ok(Eigensystem { spectrum: Spectrum::new(config, values), vectors })
}

//! The monic sextic whose roots are the stationary values of `J3`, and a
//! real-root finder on `[-J, J]`.
//!
//! Eliminating `J1` and `J2` through the stationarity conditions and
//! substituting into `|J|^2 = J^2` leaves a degree-6 polynomial in `J3`.

use crate::correspondence::TwistingConfig;
use crate::dynamics::InertiaConfig;
use crate::error::{Error, Result};

/// `a0 + a1 x + ... + a6 x^6` with `a6 = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Degree6Poly {
    pub coeffs: [f64; 7],
}

impl Degree6Poly {
    fn monic(mut coeffs: [f64; 7]) -> Result<Self> {
        coeffs[6] = 1.0;
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite coefficient in {coeffs:?}")));
        }
        Ok(Self { coeffs })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// Value and first derivative.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    /// `max_k |a_k| J^k`, the natural size of the polynomial on `[-J, J]`.
    pub fn scale(&self, big_j: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * big_j.powi(k as i32))
            .fold(0.0, f64::max)
    }
}

/// Coefficients in rigid-body variables. Needs `I3 != I1` and `I3 != I2`.
pub fn poly_coeffs_classical(cfg: &InertiaConfig, big_j: f64) -> Result<Degree6Poly> {
    cfg.validate()?;
    let (i1, i2, i3, k1, k2, k3) = (cfg.i1, cfg.i2, cfg.i3, cfg.k1, cfg.k2, cfg.k3);
    if i3 == i1 || i3 == i2 {
        return Err(Error::DegenerateAxis(format!(
            "I3 = {i3} coincides with I1 = {i1} or I2 = {i2}"
        )));
    }
    let jj = big_j * big_j;
    let d1 = i3 - i1;
    let d2 = i3 - i2;
    let dd = d1 * d1 * d2 * d2;
    let m = i1 * i3 - 2.0 * i1 * i2 + i2 * i3;
    let q = m * m + 2.0 * i1 * i2 * d1 * d2;
    let p12 = i1 * i2;
    let (k3_2, k3_3, k3_4) = (k3 * k3, k3 * k3 * k3, k3 * k3 * k3 * k3);

    let a0 = -jj * k3_4 * p12 * p12 / dd;
    let a1 = -2.0 * jj * k3_3 * p12 * m / dd;
    let a2 = (p12 * p12 * k3_4 + i3 * i3 * k3_2 * (i1 * i1 * k2 * k2 + i2 * i2 * k1 * k1)
        - jj * k3_2 * q)
        / dd;
    let a3 = (2.0 * k3_3 * p12 * m
        + 2.0 * k3 * i3 * i3 * (i2 * d2 * k1 * k1 + i1 * d1 * k2 * k2))
        / dd
        - 2.0 * jj * k3 * m / (d1 * d2);
    let a4 = k3_2 * q / dd + i3 * i3 * (k1 * k1 / (d1 * d1) + k2 * k2 / (d2 * d2)) - jj;
    let a5 = 2.0 * k3 * m / (d1 * d2);
    Degree6Poly::monic([a0, a1, a2, a3, a4, a5, 1.0])
}

/// Coefficients in twisting-tensor variables. Needs `chi1 != chi3` and
/// `chi2 != chi3`.
pub fn poly_coeffs_quantum(cfg: &TwistingConfig, big_j: f64) -> Result<Degree6Poly> {
    cfg.validate()?;
    let (c1, c2, c3) = (cfg.chi1, cfg.chi2, cfg.chi3);
    let (w1, w2, w3) = (cfg.omega1, cfg.omega2, cfg.omega3);
    if c1 == c3 || c2 == c3 {
        return Err(Error::DegenerateAxis(format!(
            "chi3 = {c3} coincides with chi1 = {c1} or chi2 = {c2}"
        )));
    }
    let jj = big_j * big_j;
    let d1 = c1 - c3;
    let d2 = c2 - c3;
    let dd = d1 * d1 * d2 * d2;
    let s = c1 + c2 - 2.0 * c3;
    let q = s * s + 2.0 * d1 * d2;
    let (w1s, w2s, w3s) = (w1 * w1, w2 * w2, w3 * w3);

    let a0 = -jj * w3s * w3s / (16.0 * dd);
    let a1 = jj * w3s * w3 * s / (4.0 * dd);
    let a2 = w3s * (w1s + w2s + w3s - 4.0 * jj * q) / (16.0 * dd);
    let a3 = w3 * (w1s * (c3 - c2) + w2s * (c3 - c1) - w3s * s) / (4.0 * dd)
        + jj * w3 * s / (d1 * d2);
    let a4 = w3s * q / (4.0 * dd) + w1s / (4.0 * d1 * d1) + w2s / (4.0 * d2 * d2) - jj;
    let a5 = -w3 * s / (d1 * d2);
    Degree6Poly::monic([a0, a1, a2, a3, a4, a5, 1.0])
}

/// A real root; `multiple` marks roots of even or higher multiplicity
/// (detected through a vanishing derivative).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub x: f64,
    pub multiple: bool,
}

pub const PREGRID_CELLS: usize = 1024;
/// Roots closer than this (times `J`) are merged.
pub const ROOT_MERGE_TOL: f64 = 1e-9;
/// `|p(c)| / scale` below which a critical point counts as a root.
const CRITICAL_ROOT_TOL: f64 = 1e-10;
/// Largest distance (relative to the interval) over which round-off can
/// split a double root into two sign changes.
const PAIR_SPLIT_TOL: f64 = 1e-6;

fn eval_slice(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

fn derivative_slice(c: &[f64]) -> Vec<f64> {
    (1..c.len()).map(|k| k as f64 * c[k]).collect()
}

/// Bisection on a bracket whose endpoint values have opposite signs.
fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = eval_slice(c, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = eval_slice(c, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Newton steps that are kept only while they reduce the residual and stay
/// within `[lo, hi]`.
fn polish(c: &[f64], dc: &[f64], mut x: f64, lo: f64, hi: f64) -> f64 {
    let mut best = eval_slice(c, x).abs();
    for _ in 0..4 {
        let (v, dv) = (eval_slice(c, x), eval_slice(dc, x));
        if dv == 0.0 || v == 0.0 {
            break;
        }
        let next = x - v / dv;
        if !(next >= lo && next <= hi) {
            break;
        }
        let r = eval_slice(c, next).abs();
        if r >= best {
            break;
        }
        best = r;
        x = next;
    }
    x
}

/// Roots of the polynomial `c` in `[lo, hi]`.
///
/// The pre-grid is refined with the critical points of `c` (found the same
/// way from its derivative), so `c` is monotone on every sub-interval and
/// each holds at most one simple root, however close two roots are. A
/// critical point at which `c` vanishes to within `tol` and which has no
/// root on either side is a root of even multiplicity.
fn roots_in(c: &[f64], nodes: &[f64], tol: f64) -> Vec<Root> {
    let degree = match c.iter().rposition(|v| *v != 0.0) {
        Some(d) => d,
        None => return vec![],
    };
    let c = &c[..=degree];
    if degree == 0 {
        return vec![];
    }
    let (lo, hi) = (nodes[0], *nodes.last().unwrap());
    if degree == 1 {
        let x = -c[0] / c[1];
        return if x >= lo && x <= hi { vec![Root { x, multiple: false }] } else { vec![] };
    }
    let dc = derivative_slice(c);
    let critical: Vec<f64> = roots_in(&dc, nodes, f64::INFINITY).into_iter().map(|r| r.x).collect();

    let mut breaks: Vec<(f64, bool)> = nodes.iter().map(|&x| (x, false)).collect();
    breaks.extend(critical.iter().map(|&x| (x, true)));
    breaks.sort_by(|a, b| a.0.total_cmp(&b.0));
    breaks.dedup_by(|a, b| {
        if a.0 == b.0 {
            b.1 |= a.1;
            true
        } else {
            false
        }
    });
    let values: Vec<f64> = breaks.iter().map(|b| eval_slice(c, b.0)).collect();

    let mut found: Vec<Option<Root>> = Vec::new();
    // piece_root[i]: index in `found` of the root inside (breaks[i], breaks[i+1])
    let mut piece_root: Vec<Option<usize>> = vec![None; breaks.len().saturating_sub(1)];
    for i in 0..breaks.len() {
        if values[i] == 0.0 {
            found.push(Some(Root { x: breaks[i].0, multiple: breaks[i].1 }));
            continue;
        }
        if i + 1 < breaks.len() && values[i] * values[i + 1] < 0.0 {
            let (a, b) = (breaks[i].0, breaks[i + 1].0);
            let x = polish(c, &dc, bisect(c, a, b), a, b);
            piece_root[i] = Some(found.len());
            found.push(Some(Root { x, multiple: false }));
        }
    }
    if tol.is_finite() {
        let split = PAIR_SPLIT_TOL * (hi - lo);
        for i in 0..breaks.len() {
            let (x, is_critical) = breaks[i];
            if !is_critical || values[i] == 0.0 || values[i].abs() > tol {
                continue;
            }
            let left = if i > 0 { piece_root[i - 1] } else { None };
            let right = piece_root.get(i).copied().flatten();
            match (left, right) {
                (None, None) => found.push(Some(Root { x, multiple: true })),
                // a pair split around the critical point by round-off
                (Some(l), Some(r)) if [l, r].iter().all(|&k| found[k].is_some_and(|f| (f.x - x).abs() <= split)) => {
                    found[l] = None;
                    found[r] = None;
                    found.push(Some(Root { x, multiple: true }));
                }
                _ => {}
            }
        }
        // endpoints within tolerance count as roots
        let last = breaks.len() - 1;
        for (i, piece) in [(0, 0), (last, last.saturating_sub(1))] {
            let adjacent = piece_root.get(piece).copied().flatten().is_some();
            if values[i] != 0.0 && values[i].abs() <= tol && !adjacent {
                found.push(Some(Root { x: breaks[i].0, multiple: false }));
            }
        }
    }
    let mut found: Vec<Root> = found.into_iter().flatten().collect();
    found.sort_by(|a, b| a.x.total_cmp(&b.x));
    found
}

/// All real roots in `[-J, J]`, sorted and merged at `1e-9 J`.
///
/// Roots are bracketed on a Chebyshev-spaced pre-grid refined with the
/// critical points of `p`, then found by bisection and Newton polishing.
/// Roots of even multiplicity show up as critical points at which `p`
/// vanishes and carry the `multiple` flag.
pub fn real_roots(p: &Degree6Poly, big_j: f64) -> Vec<Root> {
    real_roots_of(&p.coeffs, big_j)
}

/// [`real_roots`] for a polynomial of any degree given lowest-first.
pub fn real_roots_of(coeffs: &[f64], big_j: f64) -> Vec<Root> {
    let big_j = big_j.abs();
    let eval = |x: f64| eval_slice(coeffs, x);
    if big_j == 0.0 {
        return if eval(0.0) == 0.0 { vec![Root { x: 0.0, multiple: false }] } else { vec![] };
    }
    let scale = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.abs() * big_j.powi(k as i32))
        .fold(0.0, f64::max);
    let nodes: Vec<f64> = (0..=PREGRID_CELLS)
        .map(|i| -big_j * (std::f64::consts::PI * i as f64 / PREGRID_CELLS as f64).cos())
        .collect();
    let found = roots_in(coeffs, &nodes, CRITICAL_ROOT_TOL * scale);

    let mut merged: Vec<Root> = Vec::new();
    for r in found {
        match merged.last_mut() {
            Some(last) if (r.x - last.x).abs() <= ROOT_MERGE_TOL * big_j => {
                last.multiple |= r.multiple;
                if eval(r.x).abs() < eval(last.x).abs() {
                    last.x = r.x;
                }
            }
            _ => merged.push(r),
        }
    }
    let dc = derivative_slice(coeffs);
    for r in merged.iter_mut() {
        if eval_slice(&dc, r.x).abs() * big_j <= 1e-8 * scale {
            r.multiple = true;
        }
    }
    merged
}

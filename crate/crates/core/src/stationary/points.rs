//! Stationary momenta on the sphere `|J| = J` and their stability.

use nalgebra::{Matrix3, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::curvature::Ellipsoid;
use super::poly::{poly_coeffs_quantum, real_roots, real_roots_of};
use crate::correspondence::{quantum_from_classical, TwistingConfig};
use crate::dynamics::{body_energy, BodyState, InertiaConfig};
use crate::error::{Error, Result};
use crate::geometry::{tangent_basis, Vec3};

/// Relative band around `J` in which a curvature radius counts as critical.
pub const MARGINAL_BAND: f64 = 1e-6;
/// Accepted `| |J| - J | / J` for a reconstructed root.
pub const NORM_TOL: f64 = 1e-8;
/// Accepted `|dJ/dt|` relative to the field scale.
pub const STATIONARY_TOL: f64 = 1e-9;
const DEDUP_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    StableMin,
    StableMax,
    Saddle,
    Marginal,
}

impl Stability {
    pub fn tag(&self) -> &'static str {
        match self {
            Stability::StableMin => "stable_min",
            Stability::StableMax => "stable_max",
            Stability::Saddle => "saddle",
            Stability::Marginal => "marginal",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        [Self::StableMin, Self::StableMax, Self::Saddle, Self::Marginal]
            .into_iter()
            .find(|v| v.tag() == s)
    }

    pub fn is_extremum(&self) -> bool {
        matches!(self, Stability::StableMin | Stability::StableMax)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    GenericRoot,
    AxisPole,
    AnalyticLmg,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub j: BodyState,
    pub energy: f64,
    pub r1: f64,
    pub r2: f64,
    pub stability: Stability,
    pub branch: Branch,
}

/// A circle of stationary momenta around a principal axis, present when two
/// twisting eigenvalues coincide and the linear term has no component in
/// their plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerateRing {
    /// Principal axis (0-based) the circle is centred on.
    pub axis: usize,
    /// Component of `J` along that axis.
    pub height: f64,
    pub radius: f64,
    pub energy: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StationarySet {
    pub points: Vec<StationaryPoint>,
    pub rings: Vec<DegenerateRing>,
}

impl StationarySet {
    pub fn count(&self, s: Stability) -> usize {
        self.points.iter().filter(|p| p.stability == s).count()
    }

    pub fn saddles(&self) -> usize {
        self.count(Stability::Saddle)
    }

    pub fn extrema(&self) -> usize {
        self.points.iter().filter(|p| p.stability.is_extremum()).count()
    }
}

/// An energy function on the momentum sphere whose level sets are
/// axis-aligned ellipsoids.
pub trait EnergySurface {
    /// Equivalent quadratic spin form with the same stationary momenta.
    fn twisting(&self) -> TwistingConfig;
    fn energy(&self, j: &Vec3) -> f64;
    /// Level set of the energy through `j`.
    fn energy_ellipsoid(&self, j: &Vec3) -> Ellipsoid;
    /// Equation-of-motion vector field.
    fn field(&self, j: &Vec3) -> Vec3;
    /// Natural size of `|field|` at `|J| = big_j`.
    fn field_scale(&self, big_j: f64) -> f64 {
        let q = self.twisting();
        q.chi().amax() * big_j * big_j + q.omega().amax() * big_j
    }
}

impl EnergySurface for InertiaConfig {
    fn twisting(&self) -> TwistingConfig {
        quantum_from_classical(self)
    }

    fn energy(&self, j: &Vec3) -> f64 {
        body_energy(&BodyState(*j), self)
    }

    fn energy_ellipsoid(&self, j: &Vec3) -> Ellipsoid {
        let e = self.energy(j);
        Ellipsoid {
            center: self.rotor(),
            semi_axes: self.moments().map(|i| (2.0 * e * i).sqrt()),
        }
    }

    fn field(&self, j: &Vec3) -> Vec3 {
        j.cross(&self.omega(j))
    }
}

/// Common shift that makes every twisting eigenvalue positive.
fn positive_shift(chi: &Vec3) -> f64 {
    let (lo, hi) = (chi.min(), chi.max());
    if lo > 0.0 {
        0.0
    } else if hi > lo {
        hi - 2.0 * lo
    } else {
        1.0 - lo
    }
}

impl EnergySurface for TwistingConfig {
    fn twisting(&self) -> TwistingConfig {
        *self
    }

    fn energy(&self, j: &Vec3) -> f64 {
        TwistingConfig::energy(self, j)
    }

    fn energy_ellipsoid(&self, j: &Vec3) -> Ellipsoid {
        // on the sphere a common shift of chi only adds a constant; a second
        // shift is used when j sits at the centre of the first ellipsoid
        let base = positive_shift(&self.chi());
        let extra = 1.0 + 2.0 * self.chi().amax();
        let omega = self.omega();
        let mut best = None;
        for shift in [base, base + extra] {
            let chi = self.chi().add_scalar(shift);
            let center = Vec3::from_fn(|k, _| -omega[k] / (2.0 * chi[k]));
            let d = j - center;
            let ell = Ellipsoid { center, semi_axes: chi.map(|c| (d.component_mul(&d).dot(&chi) / c).sqrt()) };
            if d.norm() > 1e-6 * j.norm() {
                return ell;
            }
            best.get_or_insert(ell);
        }
        best.unwrap()
    }

    fn field(&self, j: &Vec3) -> Vec3 {
        self.vector_field(j)
    }
}

/// Stability of a stationary momentum from the principal radii of the
/// energy level set at the contact point. Returns `(label, r1, r2)`.
pub fn classify_stability<S: EnergySurface + ?Sized>(
    j: &Vec3,
    surface: &S,
    big_j: f64,
) -> Result<(Stability, f64, f64)> {
    let residual = surface.field(j).norm();
    if !(residual <= 1e-7 * surface.field_scale(big_j).max(f64::MIN_POSITIVE)) {
        return Err(Error::NotStationary { residual });
    }
    let ell = surface.energy_ellipsoid(j);
    let (r1, r2) = ell.radii_at(j)?;
    let n = j.normalize();
    let band = MARGINAL_BAND * big_j;
    if (r1 - big_j).abs() < band || (r2 - big_j).abs() < band {
        return Ok((Stability::Marginal, r1, r2));
    }
    let same_side = n.dot(&(ell.center - j)) < 0.0;
    let label = if !same_side {
        Stability::StableMin
    } else if r2 > big_j {
        Stability::StableMax
    } else if r1 < big_j {
        Stability::StableMin
    } else {
        Stability::Saddle
    };
    Ok((label, r1, r2))
}

/// Orthogonal change of frame `J = R J'` after which the linear term has at
/// most one component inside every degenerate eigenspace of `chi`.
fn align_degenerate(q: &TwistingConfig, big_j: f64) -> (Matrix3<f64>, Vec3, Vec3, [usize; 3]) {
    let mut chi = q.chi();
    let omega = q.omega();
    let tol = 1e-12 * (chi.amax() + omega.amax() / big_j);
    // group[k] is the smallest index with the same eigenvalue
    let mut group = [0usize, 1, 2];
    for k in 1..3 {
        for m in 0..k {
            if (chi[k] - chi[m]).abs() <= tol && group[m] == m {
                group[k] = m;
                break;
            }
        }
    }
    let mut r = Matrix3::identity();
    for lead in 0..3 {
        let members: Vec<usize> = (0..3).filter(|&k| group[k] == lead).collect();
        if members.len() < 2 {
            continue;
        }
        let mean = members.iter().map(|&k| chi[k]).sum::<f64>() / members.len() as f64;
        for &k in &members {
            chi[k] = mean;
        }
        let w = Vec3::from_fn(|k, _| if group[k] == lead { omega[k] } else { 0.0 });
        if w.norm() == 0.0 {
            continue;
        }
        if members.len() == 3 {
            let u = w.normalize();
            let (a, b) = tangent_basis(&u);
            r = Matrix3::from_columns(&[a, b, u]);
        } else {
            let (i, j) = (members[0], members[1]);
            let u = w.normalize();
            let mut col_i = Vec3::zeros();
            col_i[i] = u[i];
            col_i[j] = u[j];
            let mut col_j = Vec3::zeros();
            col_j[i] = -u[j];
            col_j[j] = u[i];
            r.set_column(i, &col_i);
            r.set_column(j, &col_j);
        }
    }
    let mut omega_rot = r.transpose() * omega;
    // components the rotation removed are zero by construction
    for lead in 0..3 {
        let members: Vec<usize> = (0..3).filter(|&m| group[m] == lead).collect();
        if members.len() < 2 {
            continue;
        }
        let keep = if members.len() == 3 { 2 } else { members[0] };
        for &m in members.iter().filter(|&&m| m != keep) {
            omega_rot[m] = 0.0;
        }
    }
    (r, chi, omega_rot, group)
}

fn lagrange_residual(chi: &Vec3, omega: &Vec3, j: &Vec3, lambda: f64, big_j: f64) -> Vector4<f64> {
    let g = 2.0 * chi.component_mul(j) + omega - lambda * j;
    Vector4::new(g.x, g.y, g.z, 0.5 * (j.norm_squared() - big_j * big_j))
}

/// Newton iteration on the stationarity conditions with a Lagrange
/// multiplier; steps are limited to a fraction of `J`.
fn polish_point(chi: &Vec3, omega: &Vec3, start: &Vec3, big_j: f64) -> Vec3 {
    let mut j = *start;
    let mut lambda = (2.0 * chi.component_mul(&j) + omega).dot(&j) / j.norm_squared();
    let mut res = lagrange_residual(chi, omega, &j, lambda, big_j).norm();
    for _ in 0..30 {
        if res == 0.0 {
            break;
        }
        let mut m = Matrix4::zeros();
        for k in 0..3 {
            m[(k, k)] = 2.0 * chi[k] - lambda;
            m[(k, 3)] = -j[k];
            m[(3, k)] = j[k];
        }
        let f = lagrange_residual(chi, omega, &j, lambda, big_j);
        let Some(step) = m.lu().solve(&(-f)) else { break };
        let dj = Vec3::new(step[0], step[1], step[2]);
        let limit = 0.1 * big_j;
        let shrink = if dj.norm() > limit { limit / dj.norm() } else { 1.0 };
        let next = j + dj * shrink;
        let next_lambda = lambda + step[3] * shrink;
        let next_res = lagrange_residual(chi, omega, &next, next_lambda, big_j).norm();
        if !(next_res < res) {
            break;
        }
        j = next;
        lambda = next_lambda;
        res = next_res;
    }
    j
}

fn is_accepted(q: &TwistingConfig, j: &Vec3, big_j: f64) -> bool {
    (j.norm() - big_j).abs() <= NORM_TOL * big_j
        && q.vector_field(j).norm() <= STATIONARY_TOL * q.field_scale(big_j)
}

fn push_unique(list: &mut Vec<(Vec3, Branch)>, j: Vec3, branch: Branch, big_j: f64) {
    if !list.iter().any(|(p, _)| (p - j).norm() <= DEDUP_TOL * big_j) {
        list.push((j, branch));
    }
}

/// Stationary momenta in the rotated frame, for a linear term with at most
/// one nonzero component.
fn single_axis(
    chi: &Vec3,
    omega: &Vec3,
    group: &[usize; 3],
    big_j: f64,
    out: &mut Vec<(Vec3, Branch)>,
    rings: &mut Vec<(usize, f64, f64)>,
) {
    let Some(a) = (0..3).find(|&k| omega[k] != 0.0) else {
        // no linear term: principal axes, or circles in degenerate planes
        let sizes: Vec<usize> = (0..3).map(|k| group.iter().filter(|&&g| g == group[k]).count()).collect();
        if sizes[0] == 3 {
            rings.push((2, 0.0, big_j));
            return;
        }
        for k in 0..3 {
            if sizes[k] == 1 {
                let mut e = Vec3::zeros();
                e[k] = big_j;
                push_unique(out, e, Branch::AxisPole, big_j);
                push_unique(out, -e, Branch::AxisPole, big_j);
                if sizes.iter().filter(|&&s| s == 2).count() == 2 {
                    rings.push((k, 0.0, big_j));
                }
            }
        }
        return;
    };
    let mut e = Vec3::zeros();
    e[a] = big_j;
    push_unique(out, e, Branch::AxisPole, big_j);
    push_unique(out, -e, Branch::AxisPole, big_j);
    let others: Vec<usize> = (0..3).filter(|&k| k != a).collect();
    let (b, c) = (others[0], others[1]);
    let pair_degenerate = group[b] == group[c];
    for &k in &others {
        if group[k] == group[a] {
            continue;
        }
        let h = omega[a] / (2.0 * (chi[k] - chi[a]));
        if !(h.abs() < big_j) {
            continue;
        }
        let rho = (big_j * big_j - h * h).sqrt();
        if pair_degenerate {
            if k == b {
                rings.push((a, h, rho));
            }
            continue;
        }
        let mut p = Vec3::zeros();
        p[a] = h;
        p[k] = rho;
        push_unique(out, p, Branch::AnalyticLmg, big_j);
        p[k] = -rho;
        push_unique(out, p, Branch::AnalyticLmg, big_j);
    }
}

/// Polish a candidate and keep it if it is a stationary momentum.
fn accept_candidate(chi: &Vec3, omega: &Vec3, cand: Vec3, big_j: f64, out: &mut Vec<(Vec3, Branch)>) {
    if !cand.iter().all(|v| v.is_finite()) || cand.norm() == 0.0 {
        return;
    }
    // a rough root may sit slightly off the sphere; project before polishing
    let start = if (cand.norm() - big_j).abs() <= 1e-3 * big_j {
        cand * (big_j / cand.norm())
    } else {
        cand
    };
    let p = polish_point(chi, omega, &start, big_j);
    let q = TwistingConfig::new([chi.x, chi.y, chi.z], [omega.x, omega.y, omega.z], 0);
    if is_accepted(&q, &p, big_j) {
        push_unique(out, p, Branch::GenericRoot, big_j);
    }
}

/// Linear term inside the principal plane spanned by axes `e` and `o`
/// (the component along `k` vanishes). The sextic then carries an exact
/// squared factor, so the two families are solved separately: momenta in
/// the plane from a quartic, and momenta off the plane with multiplier
/// `2 chi_k`.
fn in_plane(
    chi: &Vec3,
    omega: &Vec3,
    (e, o, k): (usize, usize, usize),
    group: &[usize; 3],
    big_j: f64,
    out: &mut Vec<(Vec3, Branch)>,
) {
    let (a, b) = (omega[e], -2.0 * (chi[o] - chi[e]));
    let jj = big_j * big_j;
    let quartic = [-jj * a * a, -2.0 * a * b * jj, a * a - jj * b * b + omega[o] * omega[o], 2.0 * a * b, b * b];
    for root in real_roots_of(&quartic, big_j) {
        let z = root.x;
        let d = a + b * z;
        let mut cands = Vec::new();
        if d.abs() > 1e-8 * (a.abs() + b.abs() * big_j) {
            cands.push(omega[o] * z / d);
        } else {
            let rest = (jj - z * z).max(0.0).sqrt();
            cands.extend([rest, -rest]);
        }
        for x in cands {
            let mut p = Vec3::zeros();
            p[e] = z;
            p[o] = x;
            accept_candidate(chi, omega, p, big_j, out);
        }
    }
    if group[k] == group[o] {
        return;
    }
    let mut p = Vec3::zeros();
    p[e] = omega[e] / (2.0 * (chi[k] - chi[e]));
    p[o] = omega[o] / (2.0 * (chi[k] - chi[o]));
    let rest = jj - p.norm_squared();
    if rest > 0.0 {
        p[k] = rest.sqrt();
        accept_candidate(chi, omega, p, big_j, out);
        p[k] = -p[k];
        accept_candidate(chi, omega, p, big_j, out);
    }
}

/// Stationary momenta from the roots of the sextic, eliminating along axis
/// `e` (whose eigenvalue differs from the other two).
fn generic(
    chi: &Vec3,
    omega: &Vec3,
    e: usize,
    group: &[usize; 3],
    big_j: f64,
    out: &mut Vec<(Vec3, Branch)>,
) -> Result<()> {
    let (o1, o2) = ((e + 1) % 3, (e + 2) % 3);
    if omega[o1] == 0.0 || omega[o2] == 0.0 {
        let (o, k) = if omega[o1] == 0.0 { (o2, o1) } else { (o1, o2) };
        in_plane(chi, omega, (e, o, k), group, big_j, out);
        return Ok(());
    }
    let perm = [(e + 1) % 3, (e + 2) % 3, e];
    let pq = TwistingConfig::new(
        [chi[perm[0]], chi[perm[1]], chi[perm[2]]],
        [omega[perm[0]], omega[perm[1]], omega[perm[2]]],
        0,
    );
    let poly = poly_coeffs_quantum(&pq, big_j)?;
    let (c, w) = (pq.chi(), pq.omega());
    for root in real_roots(&poly, big_j) {
        let z = root.x;
        let mut fixed: [Option<f64>; 2] = [None, None];
        for k in 0..2 {
            let d = w[2] - 2.0 * (c[k] - c[2]) * z;
            let scale = w[2].abs() + 2.0 * (c[k] - c[2]).abs() * big_j;
            // near-zero denominators leave the component free
            if d.abs() > 1e-8 * scale {
                fixed[k] = Some(w[k] * z / d);
            }
        }
        let mut candidates = Vec::new();
        match fixed {
            [Some(x), Some(y)] => candidates.push(Vec3::new(x, y, z)),
            [Some(x), None] => {
                let rest = (big_j * big_j - z * z - x * x).max(0.0).sqrt();
                candidates.push(Vec3::new(x, rest, z));
                candidates.push(Vec3::new(x, -rest, z));
            }
            [None, Some(y)] => {
                let rest = (big_j * big_j - z * z - y * y).max(0.0).sqrt();
                candidates.push(Vec3::new(rest, y, z));
                candidates.push(Vec3::new(-rest, y, z));
            }
            [None, None] => {
                let rest = ((big_j * big_j - z * z).max(0.0) * 0.5).sqrt();
                for (sx, sy) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    candidates.push(Vec3::new(sx * rest, sy * rest, z));
                }
            }
        }
        for cand in candidates {
            let mut back = Vec3::zeros();
            for k in 0..3 {
                back[perm[k]] = cand[k];
            }
            accept_candidate(chi, omega, back, big_j, out);
        }
    }
    Ok(())
}

/// All isolated stationary momenta with `|J| = big_j`, tagged with energy
/// and stability, plus any circles of stationary momenta.
pub fn stationary_points<S: EnergySurface + ?Sized>(surface: &S, big_j: f64) -> Result<StationarySet> {
    if !(big_j > 0.0 && big_j.is_finite()) {
        return Err(Error::InvalidState(format!("J must be positive, got {big_j}")));
    }
    let q = surface.twisting();
    q.validate()?;
    let (r, chi, mut omega, group) = align_degenerate(&q, big_j);
    let zero_tol = 1e-13 * (chi.amax() * big_j + omega.amax());
    for k in 0..3 {
        if omega[k].abs() <= zero_tol {
            omega[k] = 0.0;
        }
    }
    let mut found: Vec<(Vec3, Branch)> = Vec::new();
    let mut raw_rings: Vec<(usize, f64, f64)> = Vec::new();
    let active = (0..3).filter(|&k| omega[k] != 0.0).count();
    if active <= 1 {
        single_axis(&chi, &omega, &group, big_j, &mut found, &mut raw_rings);
    } else {
        // two momenta with nearly equal components along the elimination
        // axis are poorly separated by the polynomial, so every usable axis
        // is tried and the results merged
        let usable: Vec<usize> = (0..3)
            .filter(|&k| omega[k] != 0.0 && group.iter().filter(|&&g| g == group[k]).count() == 1)
            .collect();
        if usable.is_empty() {
            return Err(Error::DegenerateAxis("no non-degenerate eigenvalue with a linear term".into()));
        }
        for e in usable {
            generic(&chi, &omega, e, &group, big_j, &mut found)?;
        }
    }

    let mut points = Vec::with_capacity(found.len());
    for (p_rot, branch) in found {
        let mut j = r * p_rot;
        // the frame change can leave round-off in components that are zero
        for k in 0..3 {
            if j[k].abs() <= 1e-15 * big_j {
                j[k] = 0.0;
            }
        }
        if !is_accepted(&q, &j, big_j) {
            j = polish_point(&q.chi(), &q.omega(), &j, big_j);
        }
        let (stability, r1, r2) = classify_stability(&j, surface, big_j)?;
        points.push(StationaryPoint {
            j: BodyState(j),
            energy: surface.energy(&j),
            r1,
            r2,
            stability,
            branch,
        });
    }
    points.sort_by(|a, b| {
        (a.j.0.z, a.j.0.x, a.j.0.y)
            .partial_cmp(&(b.j.0.z, b.j.0.x, b.j.0.y))
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let rings = raw_rings
        .into_iter()
        .map(|(axis, height, radius)| {
            let axis_dir = r.column(axis).into_owned();
            let (a, _) = tangent_basis(&axis_dir);
            let sample = axis_dir * height + a * radius;
            let k = axis_dir.iamax();
            DegenerateRing {
                axis: k,
                height: height * axis_dir[k].signum(),
                radius,
                energy: surface.energy(&sample),
            }
        })
        .collect();
    Ok(StationarySet { points, rings })
}

/// Closed-form stationary energy of the transverse-field-free case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LmgLevel {
    pub label: &'static str,
    /// `NaN` when the eigenvalue pair is degenerate and no closed form exists.
    pub energy: f64,
    pub exists: bool,
}

/// Energies of the six candidate stationary momenta i..vi when only the
/// third linear component is present.
pub fn lmg_stationary_energies(cfg: &TwistingConfig, big_j: f64) -> Result<Vec<LmgLevel>> {
    if cfg.omega1 != 0.0 || cfg.omega2 != 0.0 {
        return Err(Error::NotLmg { omega1: cfg.omega1, omega2: cfg.omega2 });
    }
    let (c1, c2, c3, w) = (cfg.chi1, cfg.chi2, cfg.chi3, cfg.omega3);
    let jj = big_j * big_j;
    let side = |c: f64| -> (f64, bool) {
        if c == c3 {
            (f64::NAN, false)
        } else {
            (c * jj + w * w / (4.0 * (c - c3)), w.abs() < 2.0 * (c - c3).abs() * big_j)
        }
    };
    let (e13, x13) = side(c1);
    let (e23, x23) = side(c2);
    Ok(vec![
        LmgLevel { label: "i", energy: c3 * jj + w * big_j, exists: true },
        LmgLevel { label: "ii", energy: c3 * jj - w * big_j, exists: true },
        LmgLevel { label: "iii", energy: e13, exists: x13 },
        LmgLevel { label: "iv", energy: e13, exists: x13 },
        LmgLevel { label: "v", energy: e23, exists: x23 },
        LmgLevel { label: "vi", energy: e23, exists: x23 },
    ])
}

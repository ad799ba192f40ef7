use eulertop::correspondence::classical_from_quantum;
use eulertop::dynamics::{integrate, BodyState};
use eulertop::geometry::direction;
use eulertop::quantum::*;
use eulertop::stationary::{stationary_points, Stability};
use eulertop::TwistingConfig;
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use proptest::prelude::*;

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

#[test]
fn angular_momentum_algebra_up_to_two_hundred() {
    let i = Complex64::i();
    for n in [1u32, 2, 3, 10, 41, 200] {
        let s = spin_matrices(n);
        let c12 = commutator(&s.j1, &s.j2) - &s.j3 * i;
        let c23 = commutator(&s.j2, &s.j3) - &s.j1 * i;
        let c31 = commutator(&s.j3, &s.j1) - &s.j2 * i;
        let scale = s.j.max(1.0);
        for c in [c12, c23, c31] {
            assert!(max_abs(&c) < 1e-12 * scale, "n = {n}: {}", max_abs(&c));
        }
        let casimir = &s.j1 * &s.j1 + &s.j2 * &s.j2 + &s.j3 * &s.j3
            - CMatrix::identity(s.dim(), s.dim()) * Complex64::from(s.j * (s.j + 1.0));
        assert!(max_abs(&casimir) < 1e-12 * scale * scale, "n = {n}");
    }
}

#[test]
fn spin_one_quadratic_term() {
    let cfg = TwistingConfig::new([0.0, 0.0, 1.0], [0.0; 3], 2);
    let h = build_hamiltonian(&cfg);
    let diag: Vec<f64> = (0..3).map(|a| h[(a, a)].re).collect();
    assert_eq!(diag, vec![1.0, 0.0, 1.0]);
    let e = spectrum(&cfg).unwrap().energies;
    assert!((e[0]).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14 && (e[2] - 1.0).abs() < 1e-14);
}

#[test]
fn linear_term_alone_gives_zeeman_ladder() {
    let eps = 0.37;
    let e = spectrum(&TwistingConfig::new([0.0; 3], [0.0, 0.0, eps], 2)).unwrap().energies;
    for (got, want) in e.iter().zip([-eps, 0.0, eps]) {
        assert!((got - want).abs() < 1e-14);
    }
}

#[test]
fn isotropic_twisting_gives_rigid_ladder() {
    // chi J^2 is a constant, so the levels are m |Omega| shifted by chi j(j+1)
    let n = 12;
    let base = TwistingConfig::new([0.8; 3], [0.0; 3], n);
    let dir = eulertop::Vec3::new(1.0, -2.0, 0.5);
    let grid = [0.0, 0.5, 1.0, 2.0];
    let fan = spectrum_sweep(&base, &dir, &grid).unwrap();
    let j = 6.0;
    for (spec, mag) in fan.iter().zip(grid) {
        for (k, e) in spec.energies.iter().enumerate() {
            let want = 0.8 * j * (j + 1.0) + (k as f64 - j) * mag;
            assert!((e - want).abs() < 1e-10, "mag {mag} level {k}: {e} vs {want}");
        }
    }
}

#[test]
fn one_axis_twisting_levels() {
    let n = 10;
    let s = spectrum(&TwistingConfig::new([0.0, 0.0, 1.5], [0.0; 3], n)).unwrap();
    let mut want: Vec<f64> = (0..=n).map(|a| 1.5 * (a as f64 - 5.0).powi(2)).collect();
    want.sort_by(f64::total_cmp);
    for (got, w) in s.energies.iter().zip(want) {
        assert!((got - w).abs() < 1e-11);
    }
    assert_eq!(s.degeneracy_groups.len(), 5);
    assert!((s.energies[0]).abs() < 1e-12 && (s.energies[n as usize] - 1.5 * 25.0).abs() < 1e-10);
}

#[test]
fn jacobi_agrees_with_library_solver() {
    for (chi, omega, n) in [
        ([4.0, 3.0, 2.0], [0.0, 0.0, 13.0], 40u32),
        ([2.0, 0.0, -2.0], [0.5, 0.5, 0.5], 40),
        ([-1.2, 0.3, 2.7], [3.1, -2.2, 0.9], 25),
    ] {
        let cfg = TwistingConfig::new(chi, omega, n);
        let h = build_hamiltonian(&cfg);
        let ours = spectrum(&cfg).unwrap().energies;
        let mut theirs: Vec<f64> = SymmetricEigen::new(h.clone()).eigenvalues.iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        let scale = ours.iter().fold(1.0f64, |m, e| m.max(e.abs()));
        for (a, b) in ours.iter().zip(&theirs) {
            assert!((a - b).abs() < 1e-10 * scale, "{chi:?} {omega:?}: {a} vs {b}");
        }
    }
}

#[test]
fn eigenvectors_diagonalize_complex_hamiltonian() {
    let cfg = TwistingConfig::new([1.0, -0.5, 0.2], [0.4, 0.9, -0.3], 12);
    let h = build_hamiltonian(&cfg);
    let es = eigensystem(cfg, &h, true).unwrap();
    let v = es.vectors.unwrap();
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        13,
        es.spectrum.energies.iter().map(|&e| Complex64::from(e)),
    ));
    assert!(max_abs(&(&h * &v - &v * d)) < 1e-10);
    assert!(max_abs(&(v.adjoint() * &v - CMatrix::identity(13, 13))) < 1e-10);
}

#[test]
fn eigenvectors_survive_degenerate_levels() {
    // U diag(1, 1, 2, 2, 2, 3) U^dagger with a complex unitary U
    let raw = CMatrix::from_fn(6, 6, |r, c| {
        Complex64::new(((r * 7 + c * 3) % 5) as f64 - 2.0, ((r * 2 + c * 5) % 7) as f64 - 3.0)
    });
    let u = raw.qr().q();
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(
        [1.0, 1.0, 2.0, 2.0, 2.0, 3.0].map(Complex64::from).to_vec(),
    ));
    let h = &u * d * u.adjoint();
    let h = (&h + h.adjoint()) * Complex64::from(0.5);
    let es = eigensystem(TwistingConfig::new([0.0; 3], [0.0; 3], 5), &h, true).unwrap();
    assert_eq!(es.spectrum.degeneracy_groups, vec![vec![0, 1], vec![2, 3, 4]]);
    let v = es.vectors.unwrap();
    let e = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        6,
        es.spectrum.energies.iter().map(|&x| Complex64::from(x)),
    ));
    assert!(max_abs(&(v.adjoint() * &v - CMatrix::identity(6, 6))) < 1e-10);
    assert!(max_abs(&(&h * &v - &v * e)) < 1e-10);
}

#[test]
fn trace_is_preserved() {
    let cfg = TwistingConfig::new([0.7, -1.9, 1.1], [2.0, -0.6, 1.3], 40);
    let h = build_hamiltonian(&cfg);
    let trace: f64 = (0..41).map(|a| h[(a, a)].re).sum();
    let sum: f64 = spectrum(&cfg).unwrap().energies.iter().sum();
    assert!((trace - sum).abs() < 1e-10 * trace.abs().max(1.0));
}

#[test]
fn coaxial_ground_state_degeneracy() {
    let n = 40;
    for omega in [3.0, -7.0, 11.0] {
        // omega / chi + N odd
        let e = spectrum(&TwistingConfig::new([0.0, 0.0, 1.0], [0.0, 0.0, omega], n)).unwrap().energies;
        assert!((e[1] - e[0]).abs() < 1e-10, "omega {omega}: {} {}", e[0], e[1]);
    }
}

#[test]
fn coaxial_extreme_dicke_index() {
    let n = 40;
    let s = spin_matrices(n);
    for omega in [2.6, -5.3, 9.9, -14.2] {
        let cfg = TwistingConfig::new([0.0, 0.0, 1.0], [0.0, 0.0, omega], n);
        let es = eigensystem(cfg, &build_hamiltonian(&cfg), true).unwrap();
        let ground = es.vectors.unwrap().column(0).into_owned();
        let a = ground.iter().map(|z| z.norm()).enumerate().max_by(|x, y| x.1.total_cmp(&y.1)).unwrap().0;
        assert_eq!(s.m(a), (-omega / 2.0).round(), "omega {omega}");
    }
}

#[test]
fn unitary_evolution_keeps_norm() {
    let cfg = TwistingConfig::new([1.0, 0.3, -0.8], [0.5, 1.2, -0.4], 30);
    let st = spin_coherent_state(0.9, 2.1, 30).unwrap();
    let times: Vec<f64> = (0..50).map(|k| 0.37 * k as f64).collect();
    for s in evolve_moments(&st, &cfg, &times).unwrap() {
        assert!((s.norm - 1.0).abs() < 1e-10);
    }
}

#[test]
fn pure_rotation_precesses_rigidly() {
    let cfg = TwistingConfig::new([0.0; 3], [0.0, 0.0, 1.3], 20);
    let st = spin_coherent_state(1.0, 0.0, 20).unwrap();
    let times: Vec<f64> = (0..20).map(|k| 0.25 * k as f64).collect();
    let out = evolve_moments(&st, &cfg, &times).unwrap();
    let eig0 = SymmetricEigen::new(out[0].covariance).eigenvalues;
    for s in &out {
        // dJ/dt = grad H x J turns J about +z at rate 1.3
        let want = direction(1.0, 1.3 * s.t) * 10.0;
        assert!((s.mean - want).norm() < 1e-9, "t = {}", s.t);
        let mut a: Vec<f64> = SymmetricEigen::new(s.covariance).eigenvalues.iter().copied().collect();
        let mut b: Vec<f64> = eig0.iter().copied().collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}

#[test]
fn one_axis_twisting_squeezes_an_equatorial_state() {
    let n = 60;
    let cfg = TwistingConfig::new([0.0, 0.0, 1.0], [0.0; 3], n);
    let st = spin_coherent_state(std::f64::consts::FRAC_PI_2, 0.0, n).unwrap();
    let times = [0.0, 0.01, 0.02, 0.04];
    let out = evolve_moments(&st, &cfg, &times).unwrap();
    let area0 = out[0].ellipse.area();
    for w in out.windows(2) {
        assert!(w[1].ellipse.aspect() > w[0].ellipse.aspect());
    }
    for s in &out {
        assert!((s.ellipse.area() - area0).abs() < 0.05 * area0, "t = {}", s.t);
    }
}

#[test]
fn mean_spin_follows_classical_motion_at_short_times() {
    // the horizon is a quarter of 1/(spread(chi) sqrt(N)), where a twisted
    // coherent state loses about three percent of its mean length
    let n = 100;
    let j = 0.5 * n as f64;
    for (chi, omega, theta, phi) in [
        ([0.6, -0.4, 0.2], [0.3, 0.5, -0.2], 1.2, 0.4),
        ([4.0, 3.0, 2.0], [0.0, 0.0, 10.0], 1.5708, 1.2),
        ([2.0, 0.0, -2.0], [0.5, 0.5, 0.5], 2.5, 4.0),
    ] {
        let cfg = TwistingConfig::new(chi, omega, n);
        let spread = cfg.chi().max() - cfg.chi().min();
        let t_max = 1.0 / (4.0 * spread * (n as f64).sqrt());
        let steps = 100;
        let (body, _) = classical_from_quantum(&cfg);
        let classical =
            integrate(&BodyState(direction(theta, phi) * j), &body, t_max / steps as f64, steps, false).unwrap();
        let times: Vec<f64> = classical.samples.iter().map(|s| s.t).collect();
        let quantum = evolve_moments(&spin_coherent_state(theta, phi, n).unwrap(), &cfg, &times).unwrap();
        for (q, c) in quantum.iter().zip(&classical.samples) {
            assert!((q.mean - c.state.0).norm() < 0.05 * j, "{chi:?} t = {}", q.t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonian_is_hermitian(
        chi in prop::array::uniform3(-5.0f64..5.0),
        omega in prop::array::uniform3(-5.0f64..5.0),
        n in 1u32..30,
    ) {
        let h = build_hamiltonian(&TwistingConfig::new(chi, omega, n));
        prop_assert!(max_abs(&(&h - h.adjoint())) < 1e-14);
        for r in 0..h.nrows() {
            for c in 0..h.ncols() {
                if r.abs_diff(c) > 2 {
                    prop_assert_eq!(h[(r, c)], Complex64::from(0.0));
                }
            }
        }
    }

    #[test]
    fn gauge_shift_moves_every_level_by_casimir(
        chi in prop::array::uniform3(-3.0f64..3.0),
        omega in prop::array::uniform3(-3.0f64..3.0),
        chi0 in -4.0f64..4.0,
        n in 1u32..24,
    ) {
        let cfg = TwistingConfig::new(chi, omega, n);
        let shifted = eulertop::correspondence::gauge_shift_quantum(&cfg, chi0);
        let a = spectrum(&cfg).unwrap().energies;
        let b = spectrum(&shifted).unwrap().energies;
        let j = cfg.spin();
        let scale = a.iter().chain(&b).fold(1.0f64, |m, e| m.max(e.abs()));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((y - x - chi0 * j * (j + 1.0)).abs() < 1e-10 * scale);
        }
    }

    #[test]
    fn coherent_states_are_normalized(theta in 0.0f64..3.14159, phi in -3.2f64..3.2, n in 1u32..120) {
        let st = spin_coherent_state(theta, phi, n).unwrap();
        prop_assert!((st.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn one_axis_twisting_support_ends() {
    let cfg = TwistingConfig::new([0.0, 0.0, 1.0], [0.0; 3], 40);
    let report = spectral_singularities(&spectrum(&cfg).unwrap(), &[]).unwrap();
    let ends: Vec<f64> = report
        .singularities
        .iter()
        .filter(|s| s.kind == SingularityKind::SupportEnd)
        .map(|s| s.energy)
        .collect();
    assert_eq!(ends.len(), 2);
    assert!(ends[0].abs() < 1e-9);
    assert!((ends[1] - 400.0).abs() < 1e-9);
}

#[test]
fn saddles_and_extrema_leave_their_mark_on_the_density() {
    let cfg = TwistingConfig::new([2.0, 0.0, -2.0], [0.5, 0.5, 0.5], 40);
    let set = stationary_points(&cfg, cfg.spin()).unwrap();
    let report = spectral_singularities(&spectrum(&cfg).unwrap(), &set.points).unwrap();
    assert_eq!(set.saddles(), 2);
    for m in &report.matches {
        assert!(m.offset_spacings < 3.0, "{m:?}");
        match m.stability {
            Stability::Saddle => assert_eq!(m.singularity.kind, SingularityKind::Peak, "{m:?}"),
            _ => assert_ne!(m.singularity.kind, SingularityKind::Peak, "{m:?}"),
        }
    }
}

use eulertop::dynamics::{djdt, energy_gradient, integrate, precession_frequency, propagate, BodyState};
use eulertop::stationary::stationary_points;
use eulertop::{InertiaConfig, Vec3};
use proptest::prelude::*;

fn body() -> impl Strategy<Value = InertiaConfig> {
    (prop::array::uniform3(0.5f64..3.0), prop::array::uniform3(-1.0f64..1.0))
        .prop_map(|(i, k)| InertiaConfig::formal(i, k).unwrap())
}

fn direction() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-1.0f64..1.0)
        .prop_filter("away from the origin", |v| Vec3::from(*v).norm() > 0.1)
        .prop_map(|v| Vec3::from(v).normalize())
}

/// Step size with `dt * |omega| <= scale` anywhere on the sphere of radius `big_j`.
fn safe_dt(cfg: &InertiaConfig, big_j: f64, scale: f64) -> f64 {
    let worst = (big_j + cfg.rotor().norm()) / cfg.moments().min();
    scale / worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_and_radius_are_conserved(cfg in body(), dir in direction(), big_j in 2.0f64..4.0) {
        let dt = safe_dt(&cfg, big_j, 1e-2);
        let tr = integrate(&BodyState(dir * big_j), &cfg, dt, 100_000, false).unwrap();
        let (de, dj) = tr.conservation_drift();
        prop_assert!(de < 1e-8, "energy drift {de:e}");
        prop_assert!(dj < 1e-8, "J^2 drift {dj:e}");
    }

    #[test]
    fn forward_then_backward_returns(cfg in body(), dir in direction(), big_j in 0.5f64..4.0) {
        let dt = safe_dt(&cfg, big_j, 1e-2);
        let j0 = dir * big_j;
        let there = propagate(&j0, &cfg, dt, 2000).unwrap();
        let back = propagate(&there, &cfg, -dt, 2000).unwrap();
        prop_assert!((back - j0).norm() < 1e-9 * big_j, "{:e}", (back - j0).norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn higher_energy_lies_to_the_right(cfg in body(), dir in direction(), big_j in 0.2f64..4.0) {
        let j = dir * big_j;
        let v = djdt(&BodyState(j), &cfg).unwrap();
        prop_assume!(v.norm() > 1e-6 * big_j);
        let side = energy_gradient(&j, &cfg).cross(&v).dot(&j);
        prop_assert!(side > 0.0, "{side}");
    }

    #[test]
    fn classical_stationary_points_are_fixed(cfg in body(), big_j in 0.2f64..4.0) {
        prop_assume!(cfg.moments().iter().all(|&a| {
            cfg.moments().iter().filter(|&&b| (a - b).abs() < 0.05).count() == 1
        }));
        let set = stationary_points(&cfg, big_j).unwrap();
        let scale = big_j * (big_j + cfg.rotor().norm()) / cfg.moments().min();
        for p in &set.points {
            let v = djdt(&p.j, &cfg).unwrap();
            prop_assert!(v.norm() < 1e-8 * scale, "{:e}", v.norm());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn symmetric_top_follows_the_circle(
        i1 in 0.5f64..3.0,
        i3 in 0.5f64..3.0,
        k3 in -1.0f64..1.0,
        amp in 0.1f64..2.0,
        j3 in 0.5f64..3.0,
        phase in 0.0f64..std::f64::consts::TAU,
    ) {
        let cfg = InertiaConfig::formal([i1, i1, i3], [0.0, 0.0, k3]).unwrap();
        let rate = precession_frequency(&cfg, j3).unwrap();
        prop_assume!(rate.abs() > 0.05);
        let dt = 1e-3 / rate.abs();
        let chunk = 50_000;
        // 1000 periods of the transverse motion
        let total = (1000.0 * std::f64::consts::TAU / (rate.abs() * dt)).ceil() as usize;
        let mut j = Vec3::new(amp * phase.cos(), amp * phase.sin(), j3);
        let mut done = 0;
        let mut worst = 0.0f64;
        while done < total {
            let n = chunk.min(total - done);
            j = propagate(&j, &cfg, dt, n).unwrap();
            done += n;
            let angle = phase + rate * done as f64 * dt;
            let err = ((j.x - amp * angle.cos()).powi(2) + (j.y - amp * angle.sin()).powi(2)).sqrt();
            worst = worst.max(err);
        }
        prop_assert!(worst < 1e-6 * amp, "max error {worst:e} for amplitude {amp}");
    }
}

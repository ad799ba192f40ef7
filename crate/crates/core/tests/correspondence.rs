use eulertop::correspondence::{
    classical_from_quantum, gauge_shift_quantum, lmg_from_twisting, quantum_from_classical,
    twisting_from_lmg,
};
use eulertop::dynamics::{djdt, BodyState};
use eulertop::{InertiaConfig, TwistingConfig, Vec3};
use proptest::prelude::*;

fn twisting() -> impl Strategy<Value = TwistingConfig> {
    (prop::array::uniform3(-5.0f64..5.0), prop::array::uniform3(-5.0f64..5.0))
        .prop_map(|(chi, omega)| TwistingConfig::new(chi, omega, 0))
}

fn state() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-3.0f64..3.0).prop_map(Vec3::from)
}

fn field_scale(q: &TwistingConfig, j: &Vec3) -> f64 {
    (q.chi().amax() * j.norm_squared() + q.omega().amax() * j.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn gauge_shift_leaves_the_field_alone(q in twisting(), chi0 in -10.0f64..10.0, j in state()) {
        let shifted = gauge_shift_quantum(&q, chi0);
        let d = (q.vector_field(&j) - shifted.vector_field(&j)).norm();
        prop_assert!(d < 1e-12 * field_scale(&q, &j) * (1.0 + chi0.abs()), "{d:e}");
    }

    #[test]
    fn quantum_to_classical_to_quantum_keeps_the_field(q in twisting(), j in state()) {
        let (body, _) = classical_from_quantum(&q);
        body.validate().unwrap();
        prop_assert!(body.satisfies_triangle());
        let back = djdt(&BodyState(j), &body).unwrap();
        let d = (back - q.vector_field(&j)).norm();
        prop_assert!(d < 1e-12 * field_scale(&q, &j) * 10.0, "{d:e}");
    }

    #[test]
    fn classical_round_trip_keeps_the_field(
        i in prop::array::uniform3(0.3f64..3.0),
        k in prop::array::uniform3(-2.0f64..2.0),
        j in state(),
    ) {
        let cfg = InertiaConfig::formal(i, k).unwrap();
        let (body, _) = classical_from_quantum(&quantum_from_classical(&cfg));
        let a = djdt(&BodyState(j), &cfg).unwrap();
        let b = djdt(&BodyState(j), &body).unwrap();
        let scale = (j.norm_squared() + j.norm() * cfg.rotor().norm()) / cfg.moments().min();
        prop_assert!((a - b).norm() < 1e-12 * scale.max(1.0) * 10.0, "{:e}", (a - b).norm());
    }

    #[test]
    fn lmg_map_only_shifts_chi(chi in prop::array::uniform3(-5.0f64..5.0), eps in -5.0f64..5.0) {
        let q = TwistingConfig::new(chi, [0.0, 0.0, eps], 0);
        let back = twisting_from_lmg(&lmg_from_twisting(&q).unwrap());
        let shift = back.chi() - q.chi();
        prop_assert!((shift.x - shift.z).abs() < 1e-12 && (shift.y - shift.z).abs() < 1e-12);
        prop_assert_eq!(back.omega(), q.omega());
    }
}

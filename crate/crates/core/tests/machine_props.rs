mod common;

use common::*;
use obsclone::classes::{canonicalize, sample_members, ClassKind, ObservableClass};
use obsclone::linalg::{sigma, Branch, QubitState};
use obsclone::machines::*;
use obsclone::pauli::Observable;
use proptest::prelude::*;

fn random_class() -> impl Strategy<Value = ObservableClass> {
    prop::collection::vec(coeff_strategy(), 1..3).prop_filter_map("nonzero", |cs| {
        let gens: Vec<Observable> = cs.into_iter().map(|c| Observable::new(c).unwrap()).collect();
        canonicalize(&gens).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn heisenberg_dual_consistency(
        u in unitary4_strategy(), s in state_strategy(), p in state_strategy(),
        h in prop::collection::vec(-2.0f64..2.0, 4), signal in any::<bool>(),
    ) {
        let x = obsclone::pauli::decompose(&hermitian(2, &h)).unwrap();
        let branch = if signal { Branch::Signal } else { Branch::Probe };
        let lift = heisenberg_lift(&u, &p, &x, branch).unwrap();
        let heis = s.expectation(&lift.matrix());
        let schr = output_mean(&u, &s.density(), &p.density(), &x.matrix(), signal);
        prop_assert!((heis - schr).abs() < 1e-12, "{} vs {}", heis, schr);
    }
}

proptest! {
    #[test]
    fn lift_is_linear_and_unital(
        u in unitary4_strategy(), p in state_strategy(),
        a in coeff_strategy(), b in coeff_strategy(), ca in -2.0f64..2.0, cb in -2.0f64..2.0,
    ) {
        let (x, y) = (Observable::new(a).unwrap(), Observable::new(b).unwrap());
        for branch in Branch::BOTH {
            let lhs = heisenberg_lift(&u, &p, &x.scale(ca).add(&y.scale(cb)), branch).unwrap();
            let rhs = heisenberg_lift(&u, &p, &x, branch).unwrap().scale(ca)
                .add(&heisenberg_lift(&u, &p, &y, branch).unwrap().scale(cb));
            prop_assert!(lhs.distance(&rhs) < 1e-12);
            let id = heisenberg_lift(&u, &p, &Observable::pauli(0), branch).unwrap();
            prop_assert!(id.distance(&Observable::pauli(0)) < 1e-12);
        }
    }

    #[test]
    fn clones_agree_with_lifts(u in unitary4_strategy(), p in state_strategy(), s in state_strategy(), class in random_class()) {
        let m = CloningMachine::new(u, p, class, None).unwrap();
        let clones = m.clones(&s);
        for (i, branch) in Branch::BOTH.iter().enumerate() {
            for k in 1..=3 {
                let lifted = m.lift(&Observable::pauli(k), *branch);
                prop_assert!((s.expectation(&lifted.matrix()) - clones[i].bloch()[k - 1]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_param_machines_clone(a in observable_strategy()) {
        let m = one_param_machine(&a).unwrap();
        prop_assert!(verify_exact(&m, 1e-10).passed, "{:?}", verify_exact(&m, 1e-10));
    }

    #[test]
    fn commuting_machines_clone_whole_span(
        a in observable_strategy(), b0 in -2.0f64..2.0, b3 in -2.0f64..2.0, seed in any::<u64>(), s in state_strategy(),
    ) {
        prop_assume!(b3.abs() > 1e-3);
        let m = commuting_machine(&a, b0, b3).unwrap();
        prop_assert_eq!(m.class().kind(), ClassKind::TwoParamCommuting);
        prop_assert!(verify_exact(&m, 1e-10).passed);
        for x in sample_members(m.class(), 5, seed) {
            let mean = s.expectation(&x.matrix());
            for branch in Branch::BOTH {
                let lifted = m.lift(&x, branch);
                prop_assert!(lifted.distance(&x) < 1e-10);
                prop_assert!((s.expectation(&lifted.matrix()) - mean).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn transport_preserves_defects(
        u in unitary4_strategy(), p in state_strategy(), class in random_class(), w in unitary2_strategy(),
    ) {
        let m = CloningMachine::new(u, p, class, None).unwrap();
        let moved = covariant_transport(&m, &w).unwrap();
        let (before, after) = (verify_exact(&m, 1e-10), verify_exact(&moved, 1e-10));
        prop_assert!((before.max_defect - after.max_defect).abs() < 1e-10);
        for (d0, d1) in before.per_generator_defects.iter().zip(&after.per_generator_defects) {
            prop_assert!((d0[0] - d1[0]).abs() < 1e-10 && (d0[1] - d1[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn transported_cloners_still_clone(a in observable_strategy(), w in unitary2_strategy()) {
        let m = one_param_machine(&a).unwrap();
        let moved = covariant_transport(&m, &w).unwrap();
        prop_assert!(verify_exact(&moved, 1e-10).passed);
        let g = moved.class().generators()[0];
        prop_assert!(g.distance(&a.conjugated(&w).unwrap()) < 1e-12);
    }

    #[test]
    fn approximate_family_passes(theta in 0.01f64..1.56) {
        for m in [t_machine(theta).unwrap(), phase_covariant_machine(theta).unwrap()] {
            let report = verify_approximate(&m, 1e-10).unwrap();
            prop_assert!(report.passed, "{:?}", report);
            prop_assert!((report.gains_used[0] - 1.0 / theta.cos()).abs() < 1e-12);
            prop_assert!((report.gains_used[1] - 1.0 / theta.sin()).abs() < 1e-12);
        }
        prop_assert!(nccm_residual(theta / 2.0, -theta / 2.0, 0.0, 1.0 / theta.cos(), 1.0 / theta.sin()) < 1e-10);
    }

    #[test]
    fn machine_json_round_trip(u in unitary4_strategy(), p in state_strategy(), class in random_class(), g in prop::option::of(prop::array::uniform2(1.0f64..10.0))) {
        let m = CloningMachine::new(u, p, class, g).unwrap();
        let json = obsclone::format::to_json(&m).unwrap();
        let back: CloningMachine = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(obsclone::format::to_json(&back).unwrap(), json);
    }
}

#[test]
fn non_unitary_is_rejected() {
    let bad = sigma(0);
    assert!(heisenberg_lift(&bad, &QubitState::zero(), &Observable::pauli(3), Branch::Signal).is_err());
    let scaled = cnot_unitary().scale_re(1.01);
    assert!(CloningMachine::new(scaled, QubitState::zero(), ObservableClass::sigma_xy(), None).is_err());
}

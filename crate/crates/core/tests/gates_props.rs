//! Property tests for the graded Clifford tower and the ququart gate layer.

use paragrade::graded_clifford::{
    dirac_gammas, dispersion_residual, graded_gammas, lorentz_generators, minkowski_sq, tower_mass,
};
use paragrade::grading::{grade_of_spin, Grade, GradeBasis, Spin};
use paragrade::linalg::{haar_unitary, max_abs, unitarity_residual};
use paragrade::ququart::cartan::{cartan_coords, makhlin_invariants, random_local, synthesize_su4};
use paragrade::ququart::{apply_circuit, cnot_ba, Gate, GateOp, GradeMode, LedgerStatus, QuquartState, GATE_NAMES};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn basis() -> impl Strategy<Value = GradeBasis> {
    Just(Grade::ALL).prop_shuffle().prop_map(|o| GradeBasis::new(o).unwrap())
}

fn any_gate() -> impl Strategy<Value = Gate> {
    (0..GATE_NAMES.len(), -7.0f64..7.0).prop_map(|(k, t)| {
        let (name, angled) = GATE_NAMES[k];
        Gate::parse(name, angled.then_some(t)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graded_gammas_close_in_any_ordering(b in basis()) {
        let gg = graded_gammas(&dirac_gammas(), &b);
        prop_assert!(gg.clifford_residual() <= 1e-12);
        prop_assert!(gg.cross_grade_residual() <= 1e-12);
        prop_assert!(gg.hermiticity_residual() <= 1e-12);
        prop_assert!(lorentz_generators(&gg).closure_residual() <= 1e-12);
    }

    #[test]
    fn tower_mass_ordering(t in 0u32..40, m in 0.01f64..100.0, k in 1.01f64..4.0) {
        let (s, s2) = (Spin::from_twice(t), Spin::from_twice(t + 1));
        prop_assert!(tower_mass(s2, m) < tower_mass(s, m));
        prop_assert!(tower_mass(s, k * m) > tower_mass(s, m));
    }

    #[test]
    fn dispersion_vanishes_exactly_on_shell(t in 0u32..8, m in 0.2f64..4.0, p in prop::array::uniform3(-2.0f64..2.0), eps in 0.05f64..1.0) {
        let s = Spin::from_twice(t);
        let gg = graded_gammas(&dirac_gammas(), &GradeBasis::default());
        let g = grade_of_spin(s);
        let mass = tower_mass(s, m);
        let eta = &gg.base.metric;
        let spatial: f64 = (1..4).map(|k| eta[k] * p[k - 1] * p[k - 1]).sum();
        let e = ((mass * mass - spatial) / eta[0]).sqrt();
        let on = [e, p[0], p[1], p[2]];
        prop_assert!((minkowski_sq(eta, &on) - mass * mass).abs() < 1e-9);
        prop_assert!(dispersion_residual(&gg, &on, s, m, g).unwrap() <= 1e-9 * (1.0 + e));
        let off = [e + eps, p[0], p[1], p[2]];
        prop_assert!(dispersion_residual(&gg, &off, s, m, g).unwrap() > 1e-6);
    }

    #[test]
    fn every_gate_is_unitary(g in any_gate()) {
        prop_assert!(unitarity_residual(&g.matrix()) <= 1e-12);
    }

    #[test]
    fn ledger_charge_and_strict_errors(
        steps in prop::collection::vec((any_gate(), any::<bool>()), 0..24),
        start in 0usize..4,
    ) {
        let ops: Vec<GateOp> = steps
            .iter()
            .map(|&(g, decl)| if decl { GateOp::new(g).declared() } else { GateOp::new(g) })
            .collect();
        let psi = QuquartState::basis(start);
        let (_, ledger) = apply_circuit(&ops, &psi, GradeMode::Permissive).unwrap();
        let xor = ops.iter().fold(Grade::ZERO, |acc, op| acc + op.grade_delta);
        prop_assert_eq!(ledger.charge, xor);
        // oracle: a bit is left standing iff its undeclared flips are odd in number
        let odd = |bit: usize| {
            ops.iter()
                .filter(|op| !op.interface)
                .filter(|op| if bit == 0 { op.grade_delta.a == 1 } else { op.grade_delta.b == 1 })
                .count() % 2 == 1
        };
        let violated = matches!(ledger.status(), LedgerStatus::Violated { .. });
        prop_assert_eq!(violated, odd(0) || odd(1));
        prop_assert_eq!(apply_circuit(&ops, &psi, GradeMode::Strict).is_err(), violated);
    }

    #[test]
    fn cartan_coordinates_ignore_local_layers(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = haar_unitary(4, &mut rng);
        let v = random_local(&mut rng) * &u * random_local(&mut rng);
        let (cu, cv) = (cartan_coords(&u).unwrap(), cartan_coords(&v).unwrap());
        prop_assert!(cu.max_diff(&cv) <= 1e-9);
        let ((g1u, g2u), (g1v, g2v)) = (makhlin_invariants(&u).unwrap(), makhlin_invariants(&v).unwrap());
        prop_assert!((g1u - g1v).norm() <= 1e-9 && (g2u - g2v).abs() <= 1e-9);
    }
}

#[test]
fn qplate_is_the_controlled_flip() {
    assert_eq!(Gate::QplatePi.matrix(), cnot_ba());
    assert_eq!(max_abs(&(Gate::CnotBA.matrix() - cnot_ba())), 0.0);
}

#[test]
fn hundred_haar_syntheses() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let u = haar_unitary(4, &mut rng);
        let s = synthesize_su4(&u).unwrap();
        assert!(s.cnots <= 3);
        assert!(s.error <= 1e-9, "synthesis error {}", s.error);
    }
}

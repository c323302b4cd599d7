// SPDX-License-Identifier: Apache-2.0

use fockgate::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn params() -> RamanParams {
    RamanParams::new(1.0, 0.1, 0.0, 20.0, 1).unwrap()
}

fn vacuum(cutoff: usize) -> StateVector {
    StateVector::basis(HilbertSpace::qubit(cutoff).unwrap(), Level::G, 0).unwrap()
}

/// Normalized target with highest occupied level exactly `top`.
fn target(cutoff: usize) -> impl Strategy<Value = (OscillatorState, usize)> {
    (1usize..=cutoff - 2).prop_flat_map(move |top| {
        prop::collection::vec((0.0..1.0f64, -PI..PI), top + 1).prop_map(move |v| {
            let mut amps = vec![C64::new(0.0, 0.0); cutoff];
            for (n, &(r, a)) in v.iter().enumerate() {
                amps[n] = C64::from_polar(if n == top { 0.2 + r } else { r }, a);
            }
            (OscillatorState::new(amps).unwrap().normalize().unwrap(), top)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn plans_prepare_their_target((t, top) in target(8)) {
        let p = params();
        let plan = plan_general_state(&t, &p).unwrap();
        prop_assert_eq!(plan.len(), top);
        let out = execute_plan(&plan, &vacuum(8), Model::IdealSelective, &p).unwrap();
        prop_assert!(out.report.fidelity > 1.0 - 1e-9, "fidelity {}", out.report.fidelity);
        prop_assert!(out.report.leakage < 1e-12);
        prop_assert!(out.report.min_purity() > 1.0 - 1e-9);
    }

    #[test]
    fn plan_json_round_trips((t, _) in target(7)) {
        let plan = plan_general_state(&t, &params()).unwrap().parallelize();
        let back = CircuitPlan::from_json(&plan.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, plan);
    }

    #[test]
    fn disjoint_gates_commute(a in 1usize..4, gap in 2usize..4, phi_a in 0.0..PI, phi_b in 0.0..PI) {
        let p = params();
        let s = HilbertSpace::qubit(a + gap + 2).unwrap();
        let ga = GateParams::from_angle(&p, a, 1, phi_a).unwrap();
        let gb = GateParams::from_angle(&p, a + gap, 1, phi_b).unwrap();
        prop_assert!(commutation_check(&ga, &gb, &p, &s).unwrap() < 1e-9);
    }

    #[test]
    fn group_order_does_not_matter(phis in prop::collection::vec(0.1..PI, 3), start in 0usize..3) {
        let p = params();
        let cutoff = 9;
        let steps: Vec<PlanStep> = phis
            .iter()
            .enumerate()
            .map(|(i, &phi)| PlanStep::from_gate(&GateParams::from_angle(&p, 1 + 2 * i, 1, phi).unwrap()))
            .collect();
        let mut rotated = steps.clone();
        rotated.rotate_left(start);
        let initial = StateVector::product(
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            &OscillatorState::new((0..cutoff).map(|n| C64::from_polar(1.0, n as f64)).collect())
                .unwrap()
                .normalize()
                .unwrap(),
        )
        .unwrap();
        let dummy = OscillatorState::fock(cutoff, 0).unwrap();
        let a = CircuitPlan::new(steps, &dummy).parallelize();
        prop_assert_eq!(a.groups(), vec![vec![0, 1, 2]]);
        let b = CircuitPlan::new(rotated, &dummy);
        let ra = execute_plan(&a, &initial, Model::IdealSelective, &p).unwrap();
        let rb = execute_plan(&b, &initial, Model::IdealSelective, &p).unwrap();
        let diff = (ra.oscillator.entries() - rb.oscillator.entries()).camax();
        prop_assert!(diff < 1e-10, "{diff}");
    }
}

#[test]
fn overlapping_gates_do_not_commute() {
    let p = params();
    let s = HilbertSpace::qubit(6).unwrap();
    let ga = GateParams::from_angle(&p, 1, 1, 0.7).unwrap();
    let gb = GateParams::from_angle(&p, 2, 1, 0.9).unwrap();
    assert!(commutation_check(&ga, &gb, &p, &s).unwrap() > 1e-3);
}

#[test]
fn superposition_plan_has_one_gate_per_level() {
    let p = params();
    let (a, b) = (C64::new(0.6, 0.0), C64::new(0.0, 0.8));
    for n in 1..=5 {
        let plan = plan_superposition(a, b, n, &p).unwrap();
        assert_eq!(plan.len(), n);
        let out = execute_plan(&plan, &vacuum(n + 2), Model::IdealSelective, &p).unwrap();
        assert!(out.report.fidelity > 1.0 - 1e-9);
    }
}

#[test]
fn targets_reaching_the_guard_levels_are_rejected() {
    let t = OscillatorState::fock(6, 5).unwrap();
    assert!(plan_general_state(&t, &params()).is_err());
    assert!(plan_superposition(C64::new(0.0, 0.0), C64::new(1.0, 0.0), 0, &params()).is_err());
}

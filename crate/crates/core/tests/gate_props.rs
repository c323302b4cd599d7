// SPDX-License-Identifier: Apache-2.0

use fockgate::*;
use proptest::prelude::*;
use std::f64::consts::PI;

const CUTOFF: usize = 8;

fn params() -> RamanParams {
    RamanParams::new(1.0, 0.1, 0.0, 20.0, 1).unwrap()
}

fn pair_amplitudes() -> impl Strategy<Value = (C64, C64)> {
    (0.0..PI / 2.0, -PI..PI, -PI..PI).prop_map(|(t, pa, pb)| {
        (C64::from_polar(t.cos(), pa), C64::from_polar(t.sin(), pb))
    })
}

fn branch() -> impl Strategy<Value = AtomBranch> {
    prop_oneof![Just(AtomBranch::Plus), Just(AtomBranch::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ideal_gate_matches_closed_form(
        (alpha, beta) in pair_amplitudes(),
        m in 1usize..6,
        phi in 0.0..PI,
        chi in -PI..PI,
        b in branch(),
    ) {
        let p = params();
        let s = HilbertSpace::qubit(CUTOFF).unwrap();
        let gp = GateParams::from_angle(&p, m, 1, phi).unwrap().with_phase_offset(chi);
        let osc = OscillatorState::pair(CUTOFF, m - 1, m, alpha, beta).unwrap();
        let input = StateVector::product(&b.amplitudes(2), &osc).unwrap();
        let out = ug_gate(&gp, &p, &s, Model::IdealSelective).unwrap().apply(&input).unwrap();

        let q = closed_form_rotation(alpha, beta, &gp, b).unwrap();
        let expected = StateVector::product(&b.output_amplitudes(2), &q.to_oscillator(CUTOFF).unwrap()).unwrap();
        prop_assert!((expected.inner(&out).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-9);
        prop_assert!(leakage(&out, m, 1) < 1e-12);
    }

    #[test]
    fn gates_are_unitary_in_every_model(m in 1usize..5, phi in 0.0..PI) {
        let p = params();
        let gp = GateParams::from_angle(&p, m, 1, phi).unwrap();
        for model in Model::ALL {
            let s = model.space(CUTOFF).unwrap();
            let u = ug_gate(&gp, &p, &s, model).unwrap();
            prop_assert!(u.unitarity_error() < 1e-10, "{model}: {}", u.unitarity_error());
        }
    }

    #[test]
    fn multiquantum_gate_stays_in_its_pair((alpha, beta) in pair_amplitudes(), k in 1usize..4, phi in 0.0..PI) {
        let p = params();
        let m = 4;
        let s = HilbertSpace::qubit(CUTOFF).unwrap();
        let gp = GateParams::from_angle(&p, m, k, phi).unwrap();
        let osc = OscillatorState::pair(CUTOFF, m - k, m, alpha, beta).unwrap();
        let input = StateVector::product(&AtomBranch::Plus.amplitudes(2), &osc).unwrap();
        let out = ug_gate(&gp, &p, &s, Model::IdealSelective).unwrap().apply(&input).unwrap();
        prop_assert!(leakage(&out, m, k) < 1e-12);
        let q = closed_form_rotation(alpha, beta, &gp, AtomBranch::Plus).unwrap();
        let expected = StateVector::product(&AtomBranch::Plus.output_amplitudes(2), &q.to_oscillator(CUTOFF).unwrap()).unwrap();
        prop_assert!(expected.fidelity(&out).unwrap() > 1.0 - 1e-9);
    }
}

#[test]
fn non_ideal_models_reject_multiquantum_pairs() {
    let p = params();
    let gp = GateParams::from_angle(&p, 3, 2, 0.5).unwrap();
    for model in [Model::Effective, Model::Full] {
        let s = model.space(CUTOFF).unwrap();
        assert!(ug_gate(&gp, &p, &s, model).is_err());
    }
}

#[test]
fn cutoff_must_leave_room_above_the_pair() {
    let p = params();
    let gp = GateParams::from_angle(&p, 6, 1, 0.5).unwrap();
    let s = HilbertSpace::qubit(7).unwrap();
    assert!(ug_gate(&gp, &p, &s, Model::IdealSelective).is_err());
    let s = HilbertSpace::qubit(8).unwrap();
    assert!(ug_gate(&gp, &p, &s, Model::IdealSelective).is_ok());
}

#[test]
fn model_names_round_trip() {
    for model in Model::ALL {
        assert_eq!(model.to_string().parse::<Model>().unwrap(), model);
    }
    assert!("bogus".parse::<Model>().is_err());
}

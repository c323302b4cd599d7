// SPDX-License-Identifier: Apache-2.0

use fockgate::*;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn matrix(n: usize) -> impl Strategy<Value = DMatrix<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n)
        .prop_map(move |v| DMatrix::from_iterator(n, n, v.into_iter().map(|(re, im)| c(re, im))))
}

fn state(space: HilbertSpace) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), space.dim())
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(move |v| {
            let amps = v.into_iter().map(|(re, im)| c(re, im)).collect();
            StateVector::new(space, amps).unwrap().normalize().unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_mixed_product(a in matrix(2), b in matrix(2), x in matrix(4), y in matrix(4)) {
        let lhs = tensor(&a, &x).unwrap().entries() * tensor(&b, &y).unwrap().entries();
        let rhs = tensor(&(&a * &b), &(&x * &y)).unwrap();
        prop_assert!((lhs - rhs.entries()).camax() < 1e-12);
    }

    #[test]
    fn tensor_is_bilinear(a in matrix(2), b in matrix(2), x in matrix(3), s in -2.0..2.0f64) {
        let sum = tensor(&(&a + &b * c(s, 0.0)), &x).unwrap();
        let split = tensor(&a, &x).unwrap().entries() + tensor(&b, &x).unwrap().entries() * c(s, 0.0);
        prop_assert!((sum.entries() - split).camax() < 1e-12);
    }

    #[test]
    fn reduced_state_is_a_density_matrix(psi in state(HilbertSpace::qubit(5).unwrap())) {
        let rho = reduced_oscillator_state(&psi);
        prop_assert!((rho.trace() - c(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(rho.eigenvalues().iter().all(|&l| l > -1e-12));
        prop_assert!(rho.purity() <= 1.0 + 1e-12);
        let herm = rho.entries() - rho.entries().adjoint();
        prop_assert!(herm.camax() < 1e-14);
    }

    #[test]
    fn product_states_reduce_to_pure(
        amps in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 6),
        a in -1.0..1.0f64,
    ) {
        prop_assume!(amps.iter().any(|(x, y)| x.abs() + y.abs() > 1e-3));
        let osc = OscillatorState::new(amps.into_iter().map(|(x, y)| c(x, y)).collect())
            .unwrap()
            .normalize()
            .unwrap();
        let b = (1.0 - a * a).sqrt();
        let psi = StateVector::product(&[c(a, 0.0), c(0.0, b)], &osc).unwrap();
        let rho = reduced_oscillator_state(&psi);
        prop_assert!((rho.purity() - 1.0).abs() < 1e-12);
        prop_assert!((rho.fidelity_with(&osc).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn ladder_operators_are_adjoint() {
    let a = annihilation_op(7).unwrap();
    let ad = creation_op(7).unwrap();
    assert!((a.adjoint() - ad).camax() < 1e-15);
}

#[test]
fn joint_index_is_atom_major() {
    let s = HilbertSpace::three_level(4).unwrap();
    assert_eq!(s.index(Level::G, 3).unwrap(), 3);
    assert_eq!(s.index(Level::E, 0).unwrap(), 4);
    assert_eq!(s.index(Level::H, 2).unwrap(), 10);
    assert!(s.index(Level::G, 4).is_err());
}

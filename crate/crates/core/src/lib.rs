// SPDX-License-Identifier: Apache-2.0

//! Deterministic manipulation of harmonic-oscillator states through selective
//! atom-field interactions.
//!
//! The crate is organised bottom-up:
//!
//! - [`fock`]: joint atom ⊗ truncated-Fock Hilbert space, ladder and atomic
//!   operators, states, partial traces and fidelities.
//! - [`hamiltonians`]: the three-level Raman Hamiltonian in a time-independent
//!   frame, the effective selective Hamiltonian, its dispersive/self-energy/
//!   coupling decomposition and the multi-quantum coupling.
//! - [`propagator`]: exact propagation of time-independent Hermitian
//!   generators through a cached eigendecomposition.
//! - [`gates`]: the three-step `UG_m` gate (selective pulse, spin flip,
//!   phase-rotated selective pulse) and its closed-form Fock-qubit rotation.
//! - [`synthesis`]: compilation of oscillator targets into `UG_m` sequences,
//!   plan execution and parallel scheduling of disjoint pairs.
//! - [`validate`]: the identity and invariant suite used by the CLI.

pub mod error;
pub mod fock;
pub mod gates;
pub mod hamiltonians;
pub mod propagator;
pub mod synthesis;
pub mod tolerance;
pub mod validate;

pub use error::{Error, Result};
pub use fock::{
    annihilation_op, atomic_sigma, creation_op, fidelity, reduced_oscillator_state, tensor,
    DensityMatrix, HilbertSpace, Level, OperatorMatrix, OscillatorState, StateVector,
};

pub use gates::{
    closed_form_rotation, conjugated_factors, leakage, ug_gate, AtomBranch, GateParams, Model,
    QubitRotation,
};
pub use hamiltonians::{
    build_effective_h, build_full_h, build_multiquantum_h, decompose_effective,
    effective_detuning, EffectiveDecomposition, EffectiveParams, RamanParams,
};
pub use propagator::{evolve, unitary_of, Propagator};

pub use synthesis::{
    commutation_check, execute_plan, plan_general_state, plan_superposition, CircuitPlan,
    ExecutionOutcome, ExecutionReport, PlanStep, Schedule,
};
pub use tolerance::Tolerances;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

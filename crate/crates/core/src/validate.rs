// SPDX-License-Identifier: Apache-2.0

//! Identity and invariant suite behind the `validate` command.
//!
//! Every check reports a measured value and the bound it is held to, so a
//! failing run says by how much it missed.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fock::{
    annihilation_op, creation_op, reduced_oscillator_state, HilbertSpace, Level, OperatorMatrix,
    OscillatorState, StateVector,
};
use crate::gates::{
    closed_form_rotation, conjugated_factors, ug_gate, AtomBranch, GateParams, Model,
};
use crate::hamiltonians::{build_effective_h, build_full_h, decompose_effective, RamanParams};
use crate::propagator::{unitary_of, Propagator};
use crate::synthesis::{commutation_check, execute_plan, plan_general_state};
use crate::{Result, Tolerances, C64};

/// Inputs of a validation run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationConfig {
    pub params: RamanParams,
    pub fock_cutoff: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    /// Random gates drawn for the closed-form check.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Negative control: predict with a shifted `θ₀` so the closed-form check must fail.
    #[serde(default)]
    pub corrupt_theta0: bool,
}

fn default_samples() -> usize {
    50
}

impl ValidationConfig {
    pub fn new(params: RamanParams, fock_cutoff: usize) -> Self {
        ValidationConfig {
            params,
            fock_cutoff,
            tolerances: Tolerances::default(),
            seed: 0,
            samples: default_samples(),
            corrupt_theta0: false,
        }
    }
}

/// One line of the report. A check passes when `measured < bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub passed: bool,
}

impl CheckResult {
    pub fn below(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        CheckResult {
            name: name.into(),
            measured,
            bound,
            passed: measured < bound,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `max |(a†a − n)|n⟩|` and `max |([a, a†] − I)|` below the guard level.
pub fn ladder_algebra_error(cutoff: usize) -> Result<f64> {
    let a = annihilation_op(cutoff)?;
    let ad = creation_op(cutoff)?;
    let num = &ad * &a;
    let comm = &a * &ad - &ad * &a;
    let mut err: f64 = 0.0;
    for i in 0..cutoff {
        for j in 0..cutoff {
            let n_expected = if i == j { i as f64 } else { 0.0 };
            err = err.max((num[(i, j)] - C64::new(n_expected, 0.0)).norm());
            if i < cutoff - 1 && j < cutoff - 1 {
                let c_expected = if i == j { 1.0 } else { 0.0 };
                err = err.max((comm[(i, j)] - C64::new(c_expected, 0.0)).norm());
            }
        }
    }
    Ok(err)
}

/// Relative error of the full-model energy of the dressed `|g,n⟩` against `g² n/δ`.
pub fn second_order_shift_error(p: &RamanParams, n: usize) -> Result<f64> {
    let s = HilbertSpace::three_level((n + 2).max(p.m + 2))?;
    let prop = Propagator::new(&build_full_h(p, &s)?)?;
    let idx = s.index(Level::G, n)?;
    let v = prop.eigenvectors();
    let best = (0..v.ncols())
        .max_by(|&a, &b| v[(idx, a)].norm_sqr().total_cmp(&v[(idx, b)].norm_sqr()))
        .unwrap_or(0);
    let expected = p.dispersive_shift() * n as f64;
    Ok(((prop.energies()[best] - expected) / expected).abs())
}

/// Draws a normalized `(α, β)`, `m ∈ 1..=m_max` and `φ ∈ [0, 2π)`.
pub fn random_gate_input(rng: &mut impl Rng, m_max: usize) -> (C64, C64, usize, f64) {
    let mut draw = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let (mut alpha, mut beta) = (draw(), draw());
    let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    alpha /= norm;
    beta /= norm;
    let m = rng.random_range(1..=m_max);
    let phi = rng.random_range(0.0..TAU);
    (alpha, beta, m, phi)
}

/// Random normalized oscillator state supported on `0..=top`, padded to `cutoff`.
pub fn random_target(rng: &mut impl Rng, top: usize, cutoff: usize) -> Result<OscillatorState> {
    let mut v = vec![C64::new(0.0, 0.0); cutoff];
    for z in v.iter_mut().take(top + 1) {
        *z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    OscillatorState::new(v)?.normalize()
}

/// Fidelity between the propagated gate output and the closed form.
pub fn closed_form_fidelity(
    alpha: C64,
    beta: C64,
    gp: &GateParams,
    predicted: &GateParams,
    p: &RamanParams,
    s: &HilbertSpace,
    branch: AtomBranch,
) -> Result<f64> {
    let (lower, upper) = gp.pair();
    let osc = OscillatorState::pair(s.fock_cutoff(), lower, upper, alpha, beta)?;
    let psi = StateVector::product(&branch.amplitudes(2), &osc)?;
    let out = ug_gate(gp, p, s, Model::IdealSelective)?.apply(&psi)?;
    let q = closed_form_rotation(alpha, beta, predicted, branch)?;
    let expected = StateVector::product(&branch.output_amplitudes(2), &q.to_oscillator(s.fock_cutoff())?)?;
    out.fidelity(&expected)
}

/// Runs the whole suite.
pub fn run_suite(cfg: &ValidationConfig) -> Result<ValidationReport> {
    let p = cfg.params;
    p.validate()?;
    let tol = cfg.tolerances;
    let s = HilbertSpace::qubit(cfg.fock_cutoff)?;
    s.require_cutoff(3)?;
    let m_max = (cfg.fock_cutoff - 2).min(5);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();

    checks.push(CheckResult::below(
        "ladder algebra below guard level",
        ladder_algebra_error(cfg.fock_cutoff)?,
        tol.algebraic,
    ));

    let mut herm: f64 = 0.0;
    let mut decomposition: f64 = 0.0;
    for m in 1..=m_max {
        let pm = p.with_level(m);
        let h = build_effective_h(&pm, &s)?;
        herm = herm.max(h.hermiticity_error());
        let d = decompose_effective(&pm, &s)?;
        decomposition = decomposition.max(d.sum().max_abs_diff(&h)?);
    }
    let s3 = HilbertSpace::three_level(cfg.fock_cutoff)?;
    herm = herm.max(build_full_h(&p.with_level(1), &s3)?.hermiticity_error());
    checks.push(CheckResult::below("builders are Hermitian", herm, tol.algebraic));
    checks.push(CheckResult::below("decomposition reproduces H_eff", decomposition, tol.algebraic));

    let mut comm_selective: f64 = 0.0;
    let mut comm_flipped: f64 = 0.0;
    let mut conjugation: f64 = 0.0;
    let mut projector: f64 = 0.0;
    let mut phase_form: f64 = 0.0;
    let mut regrouped: f64 = 0.0;
    let mut unitarity: f64 = 0.0;
    for m in 1..=m_max {
        let phi = rng.random_range(0.1..TAU);
        let gp = GateParams::from_angle(&p, m, 1, phi)?;
        let f = conjugated_factors(&gp, &p, &s)?;
        let theta = gp.second_pulse_phase();
        let hc = f.coupling(theta)?;
        let hxc = f.flipped_coupling(theta)?;
        comm_selective = comm_selective.max(f.self_energy.commutator(&f.coupling(0.0)?)?.max_norm());
        comm_flipped = comm_flipped.max(hc.commutator(&hxc)?.max_norm());

        let flip = OperatorMatrix::spin_flip(s);
        let h0 = &f.self_energy + &f.coupling(0.0)?;
        let lhs = &(&flip * &unitary_of(&h0, gp.tau)?) * &flip;
        conjugation = conjugation.max(lhs.max_abs_diff(&unitary_of(&f.flipped_h0, gp.tau)?)?);

        let sum = (&hc + &hxc).scale_real(gp.tau);
        projector = projector.max(sum.max_abs_diff(&f.projector_form(theta, gp.phi)?)?);
        let phases = (&f.flipped_self_energy + &f.self_energy).scale_real(gp.tau);
        phase_form = phase_form.max(phases.max_abs_diff(&f.phase_generator_form(gp.tau)?)?);

        let u = ug_gate(&gp, &p, &s, Model::IdealSelective)?;
        regrouped = regrouped.max(u.max_abs_diff(&f.regrouped_gate(&gp)?)?);
        unitarity = unitarity.max(u.unitarity_error());
        unitarity = unitarity.max(ug_gate(&gp, &p, &s, Model::Effective)?.unitarity_error());
        unitarity = unitarity.max(ug_gate(&gp, &p, &s3, Model::Full)?.unitarity_error());
    }
    checks.push(CheckResult::below("[H_0m, H_c] vanishes", comm_selective, tol.algebraic));
    checks.push(CheckResult::below("[H_c, H_xc] vanishes", comm_flipped, tol.algebraic));
    checks.push(CheckResult::below("spin-flip conjugation of e^{-iH(0)t}", conjugation, tol.propagation));
    checks.push(CheckResult::below("coupling sum in projector form", projector, tol.propagation));
    checks.push(CheckResult::below("self-energy sum in phase form", phase_form, tol.propagation));
    checks.push(CheckResult::below("regrouped gate equals three-step gate", regrouped, tol.propagation));
    checks.push(CheckResult::below("gate unitarity (all models)", unitarity, tol.propagation));

    let mut infidelity: f64 = 0.0;
    let mut impurity: f64 = 0.0;
    for i in 0..cfg.samples {
        let (alpha, beta, m, phi) = random_gate_input(&mut rng, m_max);
        let gp = GateParams::from_angle(&p, m, 1, phi)?;
        let mut predicted = gp;
        if cfg.corrupt_theta0 {
            predicted.theta0 += 0.1;
        }
        let branch = if i % 2 == 0 { AtomBranch::Plus } else { AtomBranch::Minus };
        infidelity = infidelity.max(1.0 - closed_form_fidelity(alpha, beta, &gp, &predicted, &p, &s, branch)?);

        let osc = OscillatorState::pair(cfg.fock_cutoff, m - 1, m, alpha, beta)?;
        let psi = StateVector::product(&branch.amplitudes(2), &osc)?;
        let out = ug_gate(&gp, &p, &s, Model::IdealSelective)?.apply(&psi)?;
        impurity = impurity.max(1.0 - reduced_oscillator_state(&out).purity());
    }
    checks.push(CheckResult::below("closed-form equivalence (1 - fidelity)", infidelity, tol.fidelity));
    checks.push(CheckResult::below("disentanglement (1 - purity)", impurity, tol.fidelity));

    let mut disjoint: f64 = 0.0;
    for m in 1..m_max.saturating_sub(1) {
        let ga = GateParams::from_angle(&p, m, 1, rng.random_range(0.1..TAU))?;
        let gb = GateParams::from_angle(&p, m + 2, 1, rng.random_range(0.1..TAU))?;
        disjoint = disjoint.max(commutation_check(&ga, &gb, &p, &s)?);
    }
    checks.push(CheckResult::below("disjoint-pair gates commute", disjoint, tol.fidelity));

    let top = (cfg.fock_cutoff - 2).min(6);
    let mut synthesis: f64 = 0.0;
    for _ in 0..cfg.samples.min(10) {
        let target = random_target(&mut rng, top, cfg.fock_cutoff)?;
        let plan = plan_general_state(&target, &p)?;
        let vacuum = StateVector::product(&AtomBranch::Plus.amplitudes(2), &OscillatorState::fock(cfg.fock_cutoff, 0)?)?;
        let out = execute_plan(&plan, &vacuum, Model::IdealSelective, &p)?;
        synthesis = synthesis.max(1.0 - out.report.fidelity);
    }
    checks.push(CheckResult::below("synthesis round trip (1 - fidelity)", synthesis, tol.fidelity));

    Ok(ValidationReport { checks })
}

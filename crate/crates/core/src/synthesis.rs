// SPDX-License-Identifier: Apache-2.0

//! Compilation of oscillator targets into `UG_m` ladders and plan execution.
//!
//! A ladder plan runs `UG_1, UG_2, …, UG_N` on `|0⟩`. Gate `j` splits the
//! amplitude sitting on `|j−1⟩` between `|j−1⟩` and `|j⟩`; later gates never
//! touch `|j−1⟩` again. The angles come from folding the target downward:
//! `φ_j = atan2(‖c_{≥j}‖, |c_{j−1}|)`. Each gate's phase offset `χ_j`
//! multiplies the amplitude it hands upward by `e^{iχ_j}`, so the relative
//! phases of the target are fixed one level at a time against the exact
//! closed-form rotations.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::fock::{DensityMatrix, HilbertSpace, OscillatorState, StateVector};
use crate::gates::{induced_oscillator_unitary, ug_gate, AtomBranch, GateParams, Model, QubitRotation};
use crate::hamiltonians::{ladder_factor, RamanParams};
use crate::{Error, Result, Tolerances, C64};

/// Tail norms below this are treated as empty levels.
const EMPTY_LEVEL: f64 = 1e-12;

/// One gate of a plan as it appears in a plan document.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanStep {
    pub m: usize,
    pub k: usize,
    pub phi: f64,
    pub theta0: f64,
    pub tau: f64,
    /// Phase offset `χ` shared by both pulses.
    pub phase_correction: f64,
}

impl PlanStep {
    pub fn from_gate(gp: &GateParams) -> Self {
        PlanStep {
            m: gp.m,
            k: gp.k,
            phi: gp.phi,
            theta0: gp.theta0,
            tau: gp.tau,
            phase_correction: gp.phase_offset,
        }
    }

    pub fn gate(&self) -> Result<GateParams> {
        if self.k == 0 || self.m < self.k {
            return Err(Error::InfeasibleDoublet { m: self.m, k: self.k });
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::param("tau", "pulse duration must be finite and ≥ 0"));
        }
        let lambda = if self.tau > 0.0 {
            self.phi / (self.tau * ladder_factor(self.m, self.k))
        } else {
            0.0
        };
        Ok(GateParams {
            m: self.m,
            k: self.k,
            tau: self.tau,
            lambda,
            theta0: self.theta0,
            phi: self.phi,
            eta: self.m as f64 * self.theta0,
            phase_offset: self.phase_correction,
        })
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.m.saturating_sub(self.k), self.m)
    }
}

/// How the steps of a plan may be laid out in time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Schedule {
    Sequential,
    /// Contiguous runs of steps whose pairs are mutually disjoint.
    ParallelGroups { groups: Vec<Vec<usize>> },
}

/// Greedy grouping of consecutive steps with pairwise disjoint pairs.
pub fn parallel_groups(steps: &[PlanStep]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let clash = current
            .iter()
            .any(|&j| pairs_overlap(steps[j].pair(), step.pair()));
        if clash {
            groups.push(std::mem::take(&mut current));
        }
        current.push(i);
    }
    if !current.is_empty() {
        groups.push(current);
    }
    groups
}

fn pairs_overlap(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1
}

/// Ordered `UG` steps together with the state they are meant to prepare from `|0⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitPlan {
    pub steps: Vec<PlanStep>,
    pub schedule: Schedule,
    target: Vec<C64>,
}

impl CircuitPlan {
    pub fn new(steps: Vec<PlanStep>, target: &OscillatorState) -> Self {
        CircuitPlan {
            steps,
            schedule: Schedule::Sequential,
            target: target.amplitudes().iter().copied().collect(),
        }
    }

    pub fn target(&self) -> Result<OscillatorState> {
        OscillatorState::new(self.target.clone())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn phase_corrections(&self) -> Vec<f64> {
        self.steps.iter().map(|s| s.phase_correction).collect()
    }

    pub fn gates(&self) -> Result<Vec<GateParams>> {
        self.steps.iter().map(PlanStep::gate).collect()
    }

    /// Same plan with the schedule regrouped into disjoint-pair groups.
    pub fn parallelize(mut self) -> Self {
        self.schedule = Schedule::ParallelGroups {
            groups: parallel_groups(&self.steps),
        };
        self
    }

    /// Groups in execution order; each step alone when sequential.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        match &self.schedule {
            Schedule::Sequential => (0..self.steps.len()).map(|i| vec![i]).collect(),
            Schedule::ParallelGroups { groups } => groups.clone(),
        }
    }

    /// Checks that groups cover the steps in order and hold disjoint pairs.
    pub fn validate(&self) -> Result<()> {
        let flat: Vec<usize> = self.groups().concat();
        if flat != (0..self.steps.len()).collect::<Vec<_>>() {
            return Err(Error::param("schedule", "groups must list every step once, in order"));
        }
        for group in self.groups() {
            for (a, &i) in group.iter().enumerate() {
                for &j in &group[a + 1..] {
                    if pairs_overlap(self.steps[i].pair(), self.steps[j].pair()) {
                        return Err(Error::param(
                            "schedule",
                            format!("steps {i} and {j} share a Fock level"),
                        ));
                    }
                }
            }
        }
        self.gates().map(|_| ())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::param("plan", e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: CircuitPlan =
            serde_json::from_str(text).map_err(|e| Error::param("plan", e.to_string()))?;
        plan.validate()?;
        plan.target()?;
        Ok(plan)
    }
}

/// Ladder plan for `α|0⟩ + β|n⟩`: `UG_1` at `φ₁ = arccos|α|`, then `UG_2…UG_n` at `π/2`.
pub fn plan_superposition(alpha: C64, beta: C64, n: usize, p: &RamanParams) -> Result<CircuitPlan> {
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > Tolerances::default().normalization {
        return Err(Error::Unnormalized { norm_sqr });
    }
    if n == 0 {
        if beta.norm() > EMPTY_LEVEL {
            return Err(Error::InfeasibleTarget(
                "n = 0 leaves no level for β".into(),
            ));
        }
        return Ok(CircuitPlan::new(Vec::new(), &OscillatorState::fock(2, 0)?));
    }
    let mut amplitudes = vec![C64::new(0.0, 0.0); n + 2];
    amplitudes[0] = alpha;
    amplitudes[n] = beta;
    plan_general_state(&OscillatorState::new(amplitudes)?, p)
}

/// Ladder plan preparing `target` from `|0⟩` under the ideal model.
pub fn plan_general_state(target: &OscillatorState, p: &RamanParams) -> Result<CircuitPlan> {
    p.validate()?;
    target.require_normalized(Tolerances::default().normalization)?;
    let c = target.amplitudes();
    let cutoff = target.cutoff();

    // tail[j] = ‖c_{≥j}‖
    let mut tail = vec![0.0f64; cutoff + 1];
    for j in (0..cutoff).rev() {
        tail[j] = tail[j + 1].hypot(c[j].norm());
    }
    let top = (1..cutoff).rev().find(|&j| tail[j] > EMPTY_LEVEL).unwrap_or(0);
    if top + 2 > cutoff {
        return Err(Error::InfeasibleTarget(format!(
            "support reaches level {top}, cutoff {cutoff} leaves no guard level"
        )));
    }

    let mut gates = (1..=top)
        .map(|j| GateParams::from_angle(p, j, 1, tail[j].atan2(c[j - 1].norm())))
        .collect::<Result<Vec<_>>>()?;

    // with χ = 0 every final amplitude is K_j e^{i(χ_1+…+χ_j)}
    let bare = run_closed_form(&gates, cutoff)?;
    let reference = if c[0].norm() > EMPTY_LEVEL {
        c[0].arg() - bare[0].arg()
    } else {
        0.0
    };
    let mut previous = 0.0;
    for (j, gp) in gates.iter_mut().enumerate().map(|(i, g)| (i + 1, g)) {
        let cumulative = if c[j].norm() > EMPTY_LEVEL {
            c[j].arg() - bare[j].arg() - reference
        } else {
            previous
        };
        gp.phase_offset = wrap_phase(cumulative - previous);
        previous = cumulative;
    }

    let reached = OscillatorState::from_vector(run_closed_form(&gates, cutoff)?)?;
    let f = reached.fidelity(target)?;
    if f < 1.0 - Tolerances::default().fidelity {
        return Err(Error::InfeasibleTarget(format!(
            "compiled ladder reaches fidelity {f}"
        )));
    }
    let steps = gates.iter().map(PlanStep::from_gate).collect();
    Ok(CircuitPlan::new(steps, target))
}

/// Ideal-model oscillator state after running `gates` on `|0⟩` with atom `|+⟩`.
fn run_closed_form(gates: &[GateParams], cutoff: usize) -> Result<DVector<C64>> {
    let mut v = DVector::zeros(cutoff);
    v[0] = C64::new(1.0, 0.0);
    for gp in gates {
        v = QubitRotation::of_gate(gp, AtomBranch::Plus).embed(cutoff)? * v;
    }
    Ok(v)
}

fn wrap_phase(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

/// Figures of merit of one plan execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionReport {
    pub model: Model,
    pub steps: usize,
    /// `⟨t|ρ|t⟩` for the plan target `t`.
    pub fidelity: f64,
    /// Population above the target's highest occupied level.
    pub leakage: f64,
    pub guard_population: f64,
    /// Oscillator purity after each gate, before the atom is reset.
    pub step_purities: Vec<f64>,
    /// Largest `|h⟩` population at the end of any gate.
    pub max_h_population: f64,
}

impl ExecutionReport {
    pub fn min_purity(&self) -> f64 {
        self.step_purities.iter().copied().fold(1.0, f64::min)
    }
}

/// Final states and report of [`execute_plan`].
#[derive(Debug, Clone)]
pub struct ExecutionOutcome {
    /// Joint density matrix after the last gate.
    pub joint: DMatrix<C64>,
    pub space: HilbertSpace,
    /// Oscillator state after the last gate.
    pub oscillator: DensityMatrix,
    pub report: ExecutionReport,
}

fn check_compiled_for(gp: &GateParams, p: &RamanParams, model: Model) -> Result<()> {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0);
    if !close(gp.theta0, p.dispersive_shift() * gp.tau) {
        return Err(Error::param(
            "plan",
            format!("step on level {} was compiled for a different g²/δ", gp.m),
        ));
    }
    if model != Model::IdealSelective && gp.k == 1 && gp.tau > 0.0 && !close(gp.lambda, p.lambda()) {
        return Err(Error::param(
            "plan",
            format!("step on level {} was compiled for a different λ", gp.m),
        ));
    }
    Ok(())
}

/// Runs `plan` on the oscillator part of `initial` under `model`.
///
/// Before each gate the atom is re-prepared in `|+⟩`; the atomic part of
/// `initial` is discarded. The oscillator is carried as a density matrix so
/// that residual atom-oscillator entanglement shows up as mixedness.
pub fn execute_plan(
    plan: &CircuitPlan,
    initial: &StateVector,
    model: Model,
    p: &RamanParams,
) -> Result<ExecutionOutcome> {
    p.validate()?;
    plan.validate()?;
    let cutoff = initial.space().fock_cutoff();
    let space = model.space(cutoff)?;
    let target = plan.target()?.with_cutoff(cutoff)?;
    let gates = plan.gates()?;
    for gp in &gates {
        check_compiled_for(gp, p, model)?;
        space.require_cutoff(gp.m + 2)?;
    }

    let atom = AtomBranch::Plus.amplitudes(space.atom_dim());
    let mut rho = crate::fock::reduced_oscillator_state(initial);
    let mut joint = rho.with_atom(&atom);
    let mut step_purities = Vec::with_capacity(gates.len());
    let mut max_h: f64 = 0.0;
    for gp in &gates {
        joint = rho.with_atom(&atom);
        let u = ug_gate(gp, p, &space, model)?;
        joint = u.entries() * joint * u.entries().adjoint();
        if space.atom_dim() > 2 {
            let n = cutoff;
            let h: f64 = (0..n).map(|i| joint[(2 * n + i, 2 * n + i)].re).sum();
            max_h = max_h.max(h);
        }
        rho = DensityMatrix::trace_out_atom(space, &joint);
        step_purities.push(rho.purity());
    }

    let top = target.support_top(EMPTY_LEVEL * EMPTY_LEVEL).unwrap_or(0);
    let report = ExecutionReport {
        model,
        steps: gates.len(),
        fidelity: rho.fidelity_with(&target)?,
        leakage: rho.populations()[top + 1..].iter().sum(),
        guard_population: rho.guard_population(),
        step_purities,
        max_h_population: max_h,
    };
    Ok(ExecutionOutcome {
        joint,
        space,
        oscillator: rho,
        report,
    })
}

/// `‖R_a R_b − R_b R_a‖_max` for the induced oscillator unitaries of two
/// ideal-model gates with atom `|+⟩`.
pub fn commutation_check(ga: &GateParams, gb: &GateParams, p: &RamanParams, s: &HilbertSpace) -> Result<f64> {
    let ra = induced_oscillator_unitary(&ug_gate(ga, p, s, Model::IdealSelective)?, AtomBranch::Plus);
    let rb = induced_oscillator_unitary(&ug_gate(gb, p, s, Model::IdealSelective)?, AtomBranch::Plus);
    let c = &ra * &rb - &rb * &ra;
    Ok(c.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

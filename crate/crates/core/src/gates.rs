// SPDX-License-Identifier: Apache-2.0

//! The three-step `UG_m` gate and its closed-form Fock-qubit rotation.
//!
//! `UG_m = e^{−iH(θ₂)τ} · σ_x · e^{−iH(θ₁)τ}` with `θ₁ = χ` and
//! `θ₂ = χ − θ₀`, `θ₀ = (g²/δ)τ`. `χ` is a common phase offset (zero for a
//! bare gate). The second pulse phase compensates the `e^{iθ₀}` that the
//! self-energy puts on `|m−1⟩`; with it the gate maps an atomic `σ_x`
//! eigenstate `|±⟩` to `±|±⟩` and rotates the oscillator pair
//! `{|m−1⟩, |m⟩}` without entangling the two systems:
//!
//! ```text
//! α|m−1⟩ + β|m⟩  ↦  e^{−2iη} [ (α cos ϕ + iβ sin ϕ) e^{−iθ} |m−1⟩ + (β cos ϕ + iα sin ϕ) |m⟩ ]
//! ϕ = ∓φ,  θ = −θ₀,  φ = λτ√m,  η = (g² m/δ) τ
//! ```

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::fock::{tensor, HilbertSpace, Level, OperatorMatrix, OscillatorState, StateVector};
use crate::hamiltonians::{
    build_effective_h, build_full_h, ladder_factor, pair_coupling, self_energy, RamanParams,
};
use crate::propagator::{unitary_of, Propagator};
use crate::{Error, Result, Tolerances, C64};

/// Which Hamiltonian drives the two selective pulses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// `H(θ) = H_0m + H_c(θ)` only: no coupling out of the selected pair.
    #[serde(rename = "ideal")]
    IdealSelective,
    /// The full effective Hamiltonian `H_eff(θ)` on the two-level atom.
    Effective,
    /// The three-level Raman Hamiltonian including `|h⟩`.
    Full,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::IdealSelective, Model::Effective, Model::Full];

    pub fn atom_dim(self) -> usize {
        match self {
            Model::Full => 3,
            _ => 2,
        }
    }

    pub fn space(self, fock_cutoff: usize) -> Result<HilbertSpace> {
        HilbertSpace::new(self.atom_dim(), fock_cutoff)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::IdealSelective => "ideal",
            Model::Effective => "effective",
            Model::Full => "full",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" | "ideal-selective" => Ok(Model::IdealSelective),
            "effective" => Ok(Model::Effective),
            "full" => Ok(Model::Full),
            other => Err(Error::param(
                "model",
                format!("unknown model `{other}` (expected ideal, effective or full)"),
            )),
        }
    }
}

/// Atomic input state: an eigenstate `|±⟩ = (|g⟩ ± |e⟩)/√2` of `σ_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomBranch {
    #[default]
    Plus,
    Minus,
}

impl AtomBranch {
    /// Eigenvalue of `σ_x`.
    pub fn sign(self) -> f64 {
        match self {
            AtomBranch::Plus => 1.0,
            AtomBranch::Minus => -1.0,
        }
    }

    /// Amplitudes of `|±⟩` on an `atom_dim`-level atom.
    pub fn amplitudes(self, atom_dim: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); atom_dim];
        v[0] = C64::new(FRAC_1_SQRT_2, 0.0);
        v[1] = C64::new(self.sign() * FRAC_1_SQRT_2, 0.0);
        v
    }

    /// Atomic state after the gate, `σ_x|±⟩ = ±|±⟩`.
    pub fn output_amplitudes(self, atom_dim: usize) -> Vec<C64> {
        let mut v = self.amplitudes(atom_dim);
        v.swap(0, 1);
        v
    }
}

/// Derived quantities of one `UG_m` application.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateParams {
    /// Upper level of the rotated pair `{m−k, m}`.
    pub m: usize,
    /// Quanta exchanged per atomic transition.
    pub k: usize,
    /// Duration of each selective pulse.
    pub tau: f64,
    /// Effective coupling `λ` (or `λ_k`).
    pub lambda: f64,
    /// `θ₀ = (g²/δ) τ`.
    pub theta0: f64,
    /// Rotation angle `φ = λ τ √(m!/(m−k)!)`.
    pub phi: f64,
    /// `η = (g² m/δ) τ`.
    pub eta: f64,
    /// Common phase offset `χ` added to both pulses.
    #[serde(default)]
    pub phase_offset: f64,
}

impl GateParams {
    /// Gate with pulse duration `tau` under the couplings of `p` (level `p.m` is ignored).
    pub fn from_duration(p: &RamanParams, m: usize, k: usize, tau: f64) -> Result<Self> {
        Self::with_coupling(p.lambda(), p.dispersive_shift(), m, k, tau)
    }

    /// Gate with the pulse duration chosen to give rotation angle `phi`.
    pub fn from_angle(p: &RamanParams, m: usize, k: usize, phi: f64) -> Result<Self> {
        Self::check_pair(m, k)?;
        let rate = p.lambda() * ladder_factor(m, k);
        if rate == 0.0 {
            return Err(Error::param("omega_l", "zero coupling cannot produce a rotation"));
        }
        Self::from_duration(p, m, k, phi / rate)
    }

    /// Gate with an explicit coupling `lambda` (e.g. `λ_k`) and dispersive shift `g²/δ`.
    pub fn with_coupling(lambda: f64, dispersive: f64, m: usize, k: usize, tau: f64) -> Result<Self> {
        Self::check_pair(m, k)?;
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::param("tau", "pulse duration must be finite and ≥ 0"));
        }
        Ok(GateParams {
            m,
            k,
            tau,
            lambda,
            theta0: dispersive * tau,
            phi: lambda * tau * ladder_factor(m, k),
            eta: dispersive * m as f64 * tau,
            phase_offset: 0.0,
        })
    }

    fn check_pair(m: usize, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::param("k", "number of exchanged quanta must be ≥ 1"));
        }
        if m < k {
            return Err(Error::InfeasibleDoublet { m, k });
        }
        Ok(())
    }

    pub fn with_phase_offset(self, phase_offset: f64) -> Self {
        GateParams {
            phase_offset,
            ..self
        }
    }

    /// `(m−k, m)`.
    pub fn pair(&self) -> (usize, usize) {
        (self.m - self.k, self.m)
    }

    /// `λ √(m!/(m−k)!)`, the Rabi frequency of the selected doublet.
    pub fn coupling(&self) -> f64 {
        self.lambda * ladder_factor(self.m, self.k)
    }

    pub fn first_pulse_phase(&self) -> f64 {
        self.phase_offset
    }

    pub fn second_pulse_phase(&self) -> f64 {
        self.phase_offset - self.theta0
    }
}

/// Closed-form action of a gate on its Fock pair, in the form
/// `e^{iγ} [[cos ϕ e^{−iθ}, i sin ϕ e^{−i(θ+χ)}], [i sin ϕ e^{iχ}, cos ϕ]]`
/// acting on `(α, β)` amplitudes of `(|m−k⟩, |m⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitRotation {
    pub m: usize,
    pub k: usize,
    /// Signed rotation angle `ϕ`.
    pub phi: f64,
    /// Phase parameter `θ` on the lower level.
    pub theta: f64,
    /// Coupling-phase offset `χ`.
    pub coupling_phase: f64,
    pub global_phase: f64,
}

impl QubitRotation {
    /// Rotation implemented by `gp` on atomic input `branch`.
    pub fn of_gate(gp: &GateParams, branch: AtomBranch) -> Self {
        QubitRotation {
            m: gp.m,
            k: gp.k,
            phi: -branch.sign() * gp.phi,
            theta: -gp.theta0,
            coupling_phase: gp.phase_offset,
            global_phase: -2.0 * gp.eta,
        }
    }

    pub fn matrix(&self) -> Matrix2<C64> {
        let (s, c) = self.phi.sin_cos();
        let i = C64::i();
        let lower = C64::from_polar(1.0, -self.theta);
        let chi = C64::from_polar(1.0, self.coupling_phase);
        Matrix2::new(
            lower * c,
            i * lower * chi.conj() * s,
            i * chi * s,
            C64::new(c, 0.0),
        ) * C64::from_polar(1.0, self.global_phase)
    }

    pub fn apply(&self, alpha: C64, beta: C64) -> (C64, C64) {
        let r = self.matrix();
        (
            r[(0, 0)] * alpha + r[(0, 1)] * beta,
            r[(1, 0)] * alpha + r[(1, 1)] * beta,
        )
    }

    /// The rotation embedded into Fock levels `0..cutoff` (identity elsewhere).
    pub fn embed(&self, cutoff: usize) -> Result<DMatrix<C64>> {
        if self.m >= cutoff {
            return Err(Error::CutoffTooSmall {
                cutoff,
                required: self.m + 1,
            });
        }
        let mut u = DMatrix::identity(cutoff, cutoff);
        let r = self.matrix();
        let idx = [self.m - self.k, self.m];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                u[(i, j)] = r[(a, b)];
            }
        }
        Ok(u)
    }
}

/// Rotated Fock qubit `α|lower⟩ + β|upper⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockQubit {
    pub lower: usize,
    pub upper: usize,
    pub alpha: C64,
    pub beta: C64,
}

impl FockQubit {
    pub fn to_oscillator(&self, cutoff: usize) -> Result<OscillatorState> {
        OscillatorState::pair(cutoff, self.lower, self.upper, self.alpha, self.beta)
    }
}

/// The displayed two-level rotation `(α cos ϕ + iβ sin ϕ) e^{−iθ} |m−1⟩ + (β cos ϕ + iα sin ϕ) |m⟩`.
pub fn displayed_rotation(alpha: C64, beta: C64, phi: f64, theta: f64) -> (C64, C64) {
    let (s, c) = phi.sin_cos();
    let i = C64::i();
    (
        (alpha * c + i * beta * s) * C64::from_polar(1.0, -theta),
        beta * c + i * alpha * s,
    )
}

/// Oscillator state produced by `UG_m` from `|branch⟩ ⊗ (α|m−k⟩ + β|m⟩)`,
/// including the global phase `e^{−2iη}`.
pub fn closed_form_rotation(
    alpha: C64,
    beta: C64,
    gp: &GateParams,
    branch: AtomBranch,
) -> Result<FockQubit> {
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > Tolerances::default().normalization {
        return Err(Error::Unnormalized { norm_sqr });
    }
    let (a, b) = QubitRotation::of_gate(gp, branch).apply(alpha, beta);
    let (lower, upper) = gp.pair();
    Ok(FockQubit {
        lower,
        upper,
        alpha: a,
        beta: b,
    })
}

fn selective_h(gp: &GateParams, p: &RamanParams, s: &HilbertSpace, theta: f64) -> Result<OperatorMatrix> {
    let p = p.with_level(gp.m);
    Ok(&self_energy(&p, s, gp.k)? + &pair_coupling(s, gp.m, gp.k, gp.coupling(), theta)?)
}

fn pulse_h(
    gp: &GateParams,
    p: &RamanParams,
    s: &HilbertSpace,
    model: Model,
    theta: f64,
) -> Result<OperatorMatrix> {
    s.require_atom_dim(model.atom_dim())?;
    s.require_cutoff(gp.m + 2)?;
    if model != Model::IdealSelective && gp.k != 1 {
        return Err(Error::param(
            "k",
            format!("the {model} model is single-quantum; k = {} needs the ideal model", gp.k),
        ));
    }
    let tuned = p.with_level(gp.m).with_phase(theta);
    match model {
        Model::IdealSelective => selective_h(gp, p, s, theta),
        Model::Effective => build_effective_h(&tuned, s),
        Model::Full => build_full_h(&tuned, s),
    }
}

/// Generators of the first and second selective pulse.
pub fn pulse_generators(
    gp: &GateParams,
    p: &RamanParams,
    s: &HilbertSpace,
    model: Model,
) -> Result<(OperatorMatrix, OperatorMatrix)> {
    Ok((
        pulse_h(gp, p, s, model, gp.first_pulse_phase())?,
        pulse_h(gp, p, s, model, gp.second_pulse_phase())?,
    ))
}

/// Joint unitary of one `UG_m` under `model`.
pub fn ug_gate(gp: &GateParams, p: &RamanParams, s: &HilbertSpace, model: Model) -> Result<OperatorMatrix> {
    let (first, second) = pulse_generators(gp, p, s, model)?;
    let flip = OperatorMatrix::spin_flip(*s);
    Ok(&(&unitary_of(&second, gp.tau)? * &flip) * &unitary_of(&first, gp.tau)?)
}

/// Result of stepping a state through a gate with intermediate samples.
#[derive(Debug, Clone)]
pub struct GateTrace {
    pub output: StateVector,
    /// Largest `|h⟩` population seen at the sample points (zero for two-level models).
    pub max_h_population: f64,
    /// Largest population outside the gate's pair seen at the sample points.
    pub max_leakage: f64,
}

/// Applies a gate to `psi`, sampling each pulse at `samples` evenly spaced times.
pub fn trace_gate(
    gp: &GateParams,
    p: &RamanParams,
    s: &HilbertSpace,
    model: Model,
    psi: &StateVector,
    samples: usize,
) -> Result<GateTrace> {
    if psi.space() != *s {
        return Err(Error::Dimension("state does not live in the gate's space".into()));
    }
    let (first, second) = pulse_generators(gp, p, s, model)?;
    let flip = OperatorMatrix::spin_flip(*s);
    let samples = samples.max(1);
    let mut max_h: f64 = 0.0;
    let mut max_leak: f64 = 0.0;
    let mut observe = |state: &StateVector| -> Result<()> {
        if s.atom_dim() > 2 {
            max_h = max_h.max(state.level_population(Level::H)?);
        }
        max_leak = max_leak.max(leakage(state, gp.m, gp.k));
        Ok(())
    };

    let mut state = psi.clone();
    observe(&state)?;
    for (i, generator) in [first, second].iter().enumerate() {
        if i == 1 {
            state = flip.apply(&state)?;
        }
        let prop = Propagator::new(generator)?;
        let start = state.clone();
        for j in 1..=samples {
            state = prop.evolve(&start, gp.tau * j as f64 / samples as f64)?;
            observe(&state)?;
        }
    }
    Ok(GateTrace {
        output: state,
        max_h_population: max_h,
        max_leakage: max_leak,
    })
}

/// Population outside Fock levels `{m−k, m}`, summed over atomic levels.
pub fn leakage(psi: &StateVector, m: usize, k: usize) -> f64 {
    let low = m.checked_sub(k);
    (0..psi.space().fock_cutoff())
        .filter(|&n| n != m && Some(n) != low)
        .map(|n| psi.fock_population(n))
        .sum()
}

/// Induced oscillator map `(⟨out| ⊗ I) U (|in⟩ ⊗ I)` for atomic input
/// `branch` and expected output `σ_x|branch⟩`. Unitary exactly when the gate
/// leaves the atom disentangled in that state.
pub fn induced_oscillator_unitary(u: &OperatorMatrix, branch: AtomBranch) -> DMatrix<C64> {
    let s = u.space();
    let n = s.fock_cutoff();
    let input = branch.amplitudes(s.atom_dim());
    let output = branch.output_amplitudes(s.atom_dim());
    let mut r = DMatrix::zeros(n, n);
    for (a, out) in output.iter().enumerate() {
        for (b, inp) in input.iter().enumerate() {
            let w = out.conj() * inp;
            if w.norm() == 0.0 {
                continue;
            }
            r += u.entries().view((a * n, b * n), (n, n)) * w;
        }
    }
    r
}

/// The σ_x-conjugated pieces of the selective Hamiltonian, each built from
/// its explicit matrix form.
#[derive(Debug, Clone)]
pub struct ConjugatedFactors {
    space: HilbertSpace,
    m: usize,
    k: usize,
    coupling: f64,
    dispersive: f64,
    /// `H_0m`.
    pub self_energy: OperatorMatrix,
    /// `H_x0m = (g² m/δ) I_s − (g²/δ) |e,m−1⟩⟨e,m−1|`.
    pub flipped_self_energy: OperatorMatrix,
    /// `H_x(0) = H_x0m + H_xc(0)`.
    pub flipped_h0: OperatorMatrix,
}

impl ConjugatedFactors {
    /// `H_c(θ) = λ√m (e^{iθ} |g,m⟩⟨e,m−1| + h.c.)`.
    pub fn coupling(&self, theta: f64) -> Result<OperatorMatrix> {
        pair_coupling(&self.space, self.m, self.k, self.coupling, theta)
    }

    /// `H_xc(θ) = λ√m (e^{iθ} |e,m⟩⟨g,m−1| + h.c.)`.
    pub fn flipped_coupling(&self, theta: f64) -> Result<OperatorMatrix> {
        let mut h = OperatorMatrix::zeros(self.space).into_entries();
        let upper = self.space.index(Level::E, self.m)?;
        let lower = self.space.index(Level::G, self.m - self.k)?;
        let z = C64::from_polar(self.coupling, theta);
        h[(upper, lower)] = z;
        h[(lower, upper)] = z.conj();
        OperatorMatrix::hermitian(self.space, h, 1e-12)
    }

    /// `(|+⟩⟨+| − |−⟩⟨−|) ⊗ φ (e^{iθ} |m⟩⟨m−1| + h.c.)`.
    pub fn projector_form(&self, theta: f64, phi: f64) -> Result<OperatorMatrix> {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let plus = nalgebra::DVector::from_vec(vec![h, h]);
        let minus = nalgebra::DVector::from_vec(vec![h, -h]);
        let atomic = &plus * plus.adjoint() - &minus * minus.adjoint();
        let n = self.space.fock_cutoff();
        let mut osc = DMatrix::<C64>::zeros(n, n);
        let z = C64::from_polar(phi, theta);
        osc[(self.m, self.m - self.k)] = z;
        osc[(self.m - self.k, self.m)] = z.conj();
        tensor(&atomic, &osc)
    }

    /// `(H_x0m + H_0m) τ` in the form `2η I_s − θ₀ I_at ⊗ |m−1⟩⟨m−1|`.
    pub fn phase_generator_form(&self, tau: f64) -> Result<OperatorMatrix> {
        let eta = self.dispersive * self.m as f64 * tau;
        let theta0 = self.dispersive * tau;
        let mut h = OperatorMatrix::zeros(self.space).into_entries();
        for level in [Level::G, Level::E] {
            for n in [self.m - self.k, self.m] {
                let i = self.space.index(level, n)?;
                h[(i, i)] = C64::new(2.0 * eta, 0.0);
            }
            let low = self.space.index(level, self.m - self.k)?;
            h[(low, low)] -= C64::new(theta0, 0.0);
        }
        OperatorMatrix::new(self.space, h)
    }

    /// `σ_x e^{−i(H_c(θ₂) + H_xc(θ₂))τ} e^{−i(H_x0m + H_0m)τ}` for `gp`
    /// without phase offset, the regrouped form of the gate.
    pub fn regrouped_gate(&self, gp: &GateParams) -> Result<OperatorMatrix> {
        let theta2 = gp.second_pulse_phase();
        let couplings = &self.coupling(theta2)? + &self.flipped_coupling(theta2)?;
        let phases = &self.flipped_self_energy + &self.self_energy;
        let flip = OperatorMatrix::spin_flip(self.space);
        Ok(&(&flip * &unitary_of(&couplings, gp.tau)?) * &unitary_of(&phases, gp.tau)?)
    }
}

/// Builds `H_0m`, `H_x0m`, `H_x(0)` and the coupling builders for `gp`.
pub fn conjugated_factors(gp: &GateParams, p: &RamanParams, s: &HilbertSpace) -> Result<ConjugatedFactors> {
    s.require_atom_dim(2)?;
    s.require_cutoff(gp.m + 2)?;
    let pm = p.with_level(gp.m);
    let dispersive = p.dispersive_shift();
    let self_energy = self_energy(&pm, s, gp.k)?;

    let mut flipped = OperatorMatrix::zeros(*s).into_entries();
    for level in [Level::G, Level::E] {
        for n in [gp.m - gp.k, gp.m] {
            let i = s.index(level, n)?;
            flipped[(i, i)] = C64::new(dispersive * gp.m as f64, 0.0);
        }
    }
    let low = s.index(Level::E, gp.m - gp.k)?;
    flipped[(low, low)] -= C64::new(dispersive, 0.0);
    let flipped_self_energy = OperatorMatrix::hermitian(*s, flipped, 1e-12)?;

    let mut factors = ConjugatedFactors {
        space: *s,
        m: gp.m,
        k: gp.k,
        coupling: gp.coupling(),
        dispersive,
        self_energy,
        flipped_self_energy: flipped_self_energy.clone(),
        flipped_h0: flipped_self_energy,
    };
    factors.flipped_h0 = &factors.flipped_self_energy + &factors.flipped_coupling(0.0)?;
    Ok(factors)
}

// SPDX-License-Identifier: Apache-2.0

//! Hamiltonians of the selective Raman interaction (ℏ = 1).
//!
//! The full model is the three-level atom (`g`, `e`, `h`) coupled to the
//! oscillator through `g` on `g ↔ h` and to a classical drive `Ω_L = |Ω_L| e^{iθ}`
//! on `e ↔ h`, both detuned by `δ`. Removing the `e^{-iδt}` factors of the
//! interaction picture puts `|h⟩` at energy `-δ`, and eliminating `|h⟩` in
//! second order gives the effective two-level Hamiltonian
//!
//! ```text
//! H_eff(θ) = (g²/δ) a†a σ_gg + (g² m/δ) σ_ee + λ (e^{iθ} σ_ge a† + e^{-iθ} σ_eg a),
//! λ = g |Ω_L| / δ,
//! ```
//!
//! with the engineered Stark shift `Δ_m = (g² m − |Ω_L|²)/δ` on `|e⟩` already
//! absorbed. Only the doublet `{|g,m⟩, |e,m−1⟩}` is resonant.

use log::warn;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::fock::{annihilation_op, atomic_sigma, tensor, HilbertSpace, Level, OperatorMatrix};
use crate::{Error, Result, C64};

/// Selectivity ratio `|Ω_L|/g` above which parameters are reported as
/// leaving the selective regime.
pub const SELECTIVITY_WARN_RATIO: f64 = 0.2;

const BUILD_TOL: f64 = 1e-12;

/// Physical couplings of the Raman scheme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamanParams {
    /// Oscillator coupling on `g ↔ h` (real).
    pub g: f64,
    /// `|Ω_L|`, drive amplitude on `e ↔ h`.
    pub omega_l: f64,
    /// Phase of `Ω_L` in radians.
    pub theta: f64,
    /// Detuning of both Raman legs; nonzero.
    pub delta: f64,
    /// Selected Fock level: the resonant doublet is `{|g,m⟩, |e,m−1⟩}`.
    pub m: usize,
    /// Whether the engineered shift `Δ_m` is put on `|e⟩` in the full model.
    #[serde(default = "default_true")]
    pub include_shift: bool,
}

fn default_true() -> bool {
    true
}

impl RamanParams {
    pub fn new(g: f64, omega_l: f64, theta: f64, delta: f64, m: usize) -> Result<Self> {
        let p = RamanParams {
            g,
            omega_l,
            theta,
            delta,
            m,
            include_shift: true,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta.is_finite() || self.delta == 0.0 {
            return Err(Error::param("delta", "detuning must be finite and nonzero"));
        }
        if !self.g.is_finite() {
            return Err(Error::param("g", "coupling must be finite"));
        }
        if !self.omega_l.is_finite() || self.omega_l < 0.0 {
            return Err(Error::param("omega_l", "drive amplitude must be finite and ≥ 0"));
        }
        if !self.theta.is_finite() {
            return Err(Error::param("theta", "phase must be finite"));
        }
        Ok(())
    }

    /// Copy with another selected level.
    pub fn with_level(&self, m: usize) -> Self {
        RamanParams { m, ..*self }
    }

    /// Copy with another drive phase.
    pub fn with_phase(&self, theta: f64) -> Self {
        RamanParams { theta, ..*self }
    }

    /// `λ = g |Ω_L| / δ`.
    pub fn lambda(&self) -> f64 {
        self.g * self.omega_l / self.delta
    }

    /// Dispersive coefficient `g² / δ`.
    pub fn dispersive_shift(&self) -> f64 {
        self.g * self.g / self.delta
    }

    /// Engineered shift `Δ_m = (g² m − |Ω_L|²)/δ` on `|e⟩`.
    pub fn stark_shift(&self) -> f64 {
        (self.g * self.g * self.m as f64 - self.omega_l * self.omega_l) / self.delta
    }

    /// `|Ω_L| / g`; the interaction is selective when this is small.
    pub fn selectivity_ratio(&self) -> f64 {
        self.omega_l / self.g.abs()
    }

    /// The selectivity ratio when it exceeds [`SELECTIVITY_WARN_RATIO`].
    pub fn selectivity_warning(&self) -> Option<f64> {
        let r = self.selectivity_ratio();
        (r > SELECTIVITY_WARN_RATIO).then_some(r)
    }

    pub fn effective(&self) -> EffectiveParams {
        EffectiveParams {
            lambda: self.lambda(),
            theta: self.theta,
            m: self.m,
            delta: self.delta,
            g: self.g,
        }
    }

    fn report_selectivity(&self) {
        if let Some(r) = self.selectivity_warning() {
            warn!("|Ω_L|/g = {r:.3} is outside the selective regime (> {SELECTIVITY_WARN_RATIO})");
        }
    }
}

/// Coefficients of the effective Hamiltonian derived from [`RamanParams`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    pub lambda: f64,
    pub theta: f64,
    pub m: usize,
    pub delta: f64,
    pub g: f64,
}

impl EffectiveParams {
    pub fn dispersive_shift(&self) -> f64 {
        self.g * self.g / self.delta
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn check_level_fits(p: &RamanParams, s: &HilbertSpace) -> Result<()> {
    s.require_cutoff(p.m + 2)
}

/// Full three-level Hamiltonian in the frame where it is time independent:
///
/// `H = −δ σ_hh + g (σ_hg a + σ_gh a†) + |Ω_L| (e^{iθ} σ_he + e^{−iθ} σ_eh) [+ Δ_m σ_ee]`.
pub fn build_full_h(p: &RamanParams, s: &HilbertSpace) -> Result<OperatorMatrix> {
    p.validate()?;
    s.require_atom_dim(3)?;
    check_level_fits(p, s)?;
    p.report_selectivity();

    let n = s.fock_cutoff();
    let a = annihilation_op(n)?;
    let id = DMatrix::<C64>::identity(n, n);
    let sigma = |i, j| atomic_sigma(i, j, 3);
    let phase = C64::from_polar(1.0, p.theta);

    let mut h = tensor(&(sigma(Level::H, Level::H)? * c(-p.delta)), &id)?.into_entries();
    h += tensor(&(sigma(Level::H, Level::G)? * c(p.g)), &a)?.into_entries();
    h += tensor(&(sigma(Level::G, Level::H)? * c(p.g)), &a.adjoint())?.into_entries();
    h += tensor(&(sigma(Level::H, Level::E)? * (phase * p.omega_l)), &id)?.into_entries();
    h += tensor(&(sigma(Level::E, Level::H)? * (phase.conj() * p.omega_l)), &id)?.into_entries();
    if p.include_shift {
        h += tensor(&(sigma(Level::E, Level::E)? * c(p.stark_shift())), &id)?.into_entries();
    }
    OperatorMatrix::hermitian(*s, h, BUILD_TOL)
}

/// Effective selective Hamiltonian `H_eff(θ)` on the two-level atom.
pub fn build_effective_h(p: &RamanParams, s: &HilbertSpace) -> Result<OperatorMatrix> {
    p.validate()?;
    s.require_atom_dim(2)?;
    check_level_fits(p, s)?;
    p.report_selectivity();

    let n = s.fock_cutoff();
    let a = annihilation_op(n)?;
    let ad = a.adjoint();
    let id = DMatrix::<C64>::identity(n, n);
    let sigma = |i, j| atomic_sigma(i, j, 2);
    let chi = p.dispersive_shift();
    let lambda = p.lambda();
    let phase = C64::from_polar(1.0, p.theta);

    let mut h = tensor(&sigma(Level::G, Level::G)?, &(&ad * &a * c(chi)))?.into_entries();
    h += tensor(&(sigma(Level::E, Level::E)? * c(chi * p.m as f64)), &id)?.into_entries();
    h += tensor(&(sigma(Level::G, Level::E)? * (phase * lambda)), &ad)?.into_entries();
    h += tensor(&(sigma(Level::E, Level::G)? * (phase.conj() * lambda)), &a)?.into_entries();
    OperatorMatrix::hermitian(*s, h, BUILD_TOL)
}

/// `H_eff` split into the parts acting on and off the selected Fock pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveDecomposition {
    /// Diagonal dispersive energies on Fock levels outside `{m−1, m}`.
    pub dispersive: OperatorMatrix,
    /// Off-resonant couplings `|g,n⟩ ↔ |e,n−1⟩`, `n ≠ m`, that the selective
    /// approximation neglects. Two of them, `|g,m+1⟩ ↔ |e,m⟩` and
    /// `|g,m−1⟩ ↔ |e,m−2⟩`, connect the pair to the rest of the ladder and
    /// are the source of leakage.
    pub off_resonant: OperatorMatrix,
    /// Self-energies on `{|g,m⟩, |g,m−1⟩, |e,m⟩, |e,m−1⟩}`:
    /// `(g² m/δ) I_s − (g²/δ) |g,m−1⟩⟨g,m−1|`.
    pub self_energy: OperatorMatrix,
    /// Selective coupling `λ√m (e^{iθ} |g,m⟩⟨e,m−1| + h.c.)`.
    pub coupling: OperatorMatrix,
}

impl EffectiveDecomposition {
    /// Everything outside the selected subspace: `dispersive + off_resonant`.
    pub fn outside(&self) -> OperatorMatrix {
        &self.dispersive + &self.off_resonant
    }

    /// `H(θ) = self_energy + coupling`, the Hamiltonian of the selected subspace.
    pub fn selective(&self) -> OperatorMatrix {
        &self.self_energy + &self.coupling
    }

    pub fn sum(&self) -> OperatorMatrix {
        &self.outside() + &self.selective()
    }
}

/// Self-energy block on the four joint states of the pair `{m−k, m}`.
pub(crate) fn self_energy(p: &RamanParams, s: &HilbertSpace, k: usize) -> Result<OperatorMatrix> {
    let m = p.m;
    if m < k {
        return Err(Error::InfeasibleDoublet { m, k });
    }
    let chi = p.dispersive_shift();
    let mut h = OperatorMatrix::zeros(*s).into_entries();
    for level in [Level::G, Level::E] {
        for n in [m - k, m] {
            let i = s.index(level, n)?;
            h[(i, i)] = c(chi * m as f64);
        }
    }
    let low = s.index(Level::G, m - k)?;
    h[(low, low)] -= c(chi);
    OperatorMatrix::hermitian(*s, h, BUILD_TOL)
}

/// Coupling `strength (e^{iθ} |g,m⟩⟨e,m−k| + h.c.)`.
pub(crate) fn pair_coupling(
    s: &HilbertSpace,
    m: usize,
    k: usize,
    strength: f64,
    theta: f64,
) -> Result<OperatorMatrix> {
    if m < k {
        return Err(Error::InfeasibleDoublet { m, k });
    }
    let mut h = OperatorMatrix::zeros(*s).into_entries();
    let upper = s.index(Level::G, m)?;
    let lower = s.index(Level::E, m - k)?;
    let z = C64::from_polar(strength, theta);
    h[(upper, lower)] = z;
    h[(lower, upper)] = z.conj();
    OperatorMatrix::hermitian(*s, h, BUILD_TOL)
}

/// Splits `H_eff` into dispersive, off-resonant, self-energy and coupling parts.
pub fn decompose_effective(p: &RamanParams, s: &HilbertSpace) -> Result<EffectiveDecomposition> {
    p.validate()?;
    s.require_atom_dim(2)?;
    check_level_fits(p, s)?;
    let m = p.m;
    if m == 0 {
        return Err(Error::InfeasibleDoublet { m, k: 1 });
    }
    let chi = p.dispersive_shift();
    let lambda = p.lambda();
    let n_max = s.fock_cutoff();

    let mut dispersive = OperatorMatrix::zeros(*s).into_entries();
    for n in (0..n_max).filter(|&n| n != m && n + 1 != m) {
        let gi = s.index(Level::G, n)?;
        let ei = s.index(Level::E, n)?;
        dispersive[(gi, gi)] = c(chi * n as f64);
        dispersive[(ei, ei)] = c(chi * m as f64);
    }

    let mut off_resonant = OperatorMatrix::zeros(*s).into_entries();
    for n in (1..n_max).filter(|&n| n != m) {
        let z = C64::from_polar(lambda * (n as f64).sqrt(), p.theta);
        let gi = s.index(Level::G, n)?;
        let ei = s.index(Level::E, n - 1)?;
        off_resonant[(gi, ei)] = z;
        off_resonant[(ei, gi)] = z.conj();
    }

    Ok(EffectiveDecomposition {
        dispersive: OperatorMatrix::hermitian(*s, dispersive, BUILD_TOL)?,
        off_resonant: OperatorMatrix::hermitian(*s, off_resonant, BUILD_TOL)?,
        self_energy: self_energy(p, s, 1)?,
        coupling: pair_coupling(s, m, 1, lambda * (m as f64).sqrt(), p.theta)?,
    })
}

/// `Δ(n) = g² (n − m)/δ`, detuning of the doublet `{|g,n⟩, |e,n−1⟩}`.
pub fn effective_detuning(n: usize, p: &RamanParams) -> f64 {
    p.dispersive_shift() * (n as f64 - p.m as f64)
}

/// `|Δ(n)| / λ`; values ≫ 1 mean the doublet at `n` is dispersive.
pub fn selectivity_margin(n: usize, p: &RamanParams) -> f64 {
    effective_detuning(n, p).abs() / p.lambda().abs()
}

/// `√(m!/(m−k)!)`, the matrix element of `a^k` between `|m⟩` and `|m−k⟩`.
pub fn ladder_factor(m: usize, k: usize) -> f64 {
    ((m - k + 1)..=m).map(|j| j as f64).product::<f64>().sqrt()
}

/// Multi-quantum coupling `λ_k (e^{iθ} σ_ge a†^k + e^{−iθ} σ_eg a^k)` selecting
/// the doublet `{|g,m⟩, |e,m−k⟩}`.
pub fn build_multiquantum_h(
    k: usize,
    lambda_k: f64,
    theta: f64,
    m: usize,
    s: &HilbertSpace,
) -> Result<OperatorMatrix> {
    if k == 0 {
        return Err(Error::param("k", "number of exchanged quanta must be ≥ 1"));
    }
    if m < k {
        return Err(Error::InfeasibleDoublet { m, k });
    }
    s.require_atom_dim(2)?;
    s.require_cutoff(m + 1)?;
    let n = s.fock_cutoff();
    let a = annihilation_op(n)?;
    let mut ak = DMatrix::<C64>::identity(n, n);
    for _ in 0..k {
        ak = &ak * &a;
    }
    let phase = C64::from_polar(lambda_k, theta);
    let mut h = tensor(&(atomic_sigma(Level::G, Level::E, 2)? * phase), &ak.adjoint())?
        .into_entries();
    h += tensor(&(atomic_sigma(Level::E, Level::G, 2)? * phase.conj()), &ak)?.into_entries();
    OperatorMatrix::hermitian(*s, h, BUILD_TOL)
}

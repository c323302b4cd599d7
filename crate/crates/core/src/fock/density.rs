// SPDX-License-Identifier: Apache-2.0

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{HilbertSpace, OscillatorState, StateVector};
use crate::{Error, Result, C64};

/// Density matrix on the oscillator factor.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &OscillatorState) -> Self {
        let v = state.amplitudes();
        DensityMatrix {
            entries: v * v.adjoint(),
        }
    }

    pub fn from_entries(entries: DMatrix<C64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Dimension("density matrix must be square".into()));
        }
        Ok(DensityMatrix { entries })
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn cutoff(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ ρ) = Σ |ρ_ij|² for Hermitian ρ
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Ascending real eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Eigenvector of the largest eigenvalue, i.e. the closest pure state.
    pub fn dominant_state(&self) -> Result<OscillatorState> {
        let herm = (&self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let (k, _) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .ok_or_else(|| Error::Dimension("empty density matrix".into()))?;
        OscillatorState::from_vector(eig.eigenvectors.column(k).into_owned())
    }

    /// `⟨ψ|ρ|ψ⟩`, the fidelity with a pure state.
    pub fn fidelity_with(&self, state: &OscillatorState) -> Result<f64> {
        if state.cutoff() != self.cutoff() {
            return Err(Error::Dimension(format!(
                "state cutoff {} vs density cutoff {}",
                state.cutoff(),
                self.cutoff()
            )));
        }
        let v = state.amplitudes();
        Ok(v.dotc(&(&self.entries * v)).re)
    }

    pub fn population(&self, n: usize) -> f64 {
        self.entries[(n, n)].re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.cutoff()).map(|n| self.population(n)).collect()
    }

    pub fn guard_population(&self) -> f64 {
        self.population(self.cutoff() - 1)
    }

    /// Joint density `|atom⟩⟨atom| ⊗ ρ`.
    pub(crate) fn with_atom(&self, atom: &[C64]) -> DMatrix<C64> {
        let a = DVector::from_vec(atom.to_vec());
        (&a * a.adjoint()).kronecker(&self.entries)
    }

    /// Partial trace over the atom of a joint density matrix.
    pub(crate) fn trace_out_atom(space: HilbertSpace, joint: &DMatrix<C64>) -> Self {
        let n = space.fock_cutoff();
        let mut rho = DMatrix::zeros(n, n);
        for a in 0..space.atom_dim() {
            rho += joint.view((a * n, a * n), (n, n));
        }
        DensityMatrix { entries: rho }
    }
}

/// Partial trace of `|ψ⟩⟨ψ|` over the atomic factor.
pub fn reduced_oscillator_state(psi: &StateVector) -> DensityMatrix {
    let space = psi.space();
    let n = space.fock_cutoff();
    let mut rho = DMatrix::zeros(n, n);
    for a in 0..space.atom_dim() {
        let block = psi.amplitudes().rows(a * n, n);
        rho += block * block.adjoint();
    }
    DensityMatrix { entries: rho }
}

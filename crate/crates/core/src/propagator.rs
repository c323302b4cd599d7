// SPDX-License-Identifier: Apache-2.0

//! Exact propagation `e^{−iHt}` of a time-independent Hermitian generator.
//!
//! The generator is diagonalized once, `H = V diag(ε) V†`, and every
//! `U(t) = V diag(e^{−iεt}) V†` reuses the decomposition. Generators are
//! split into blocks of mutually coupled basis states first; the model
//! Hamiltonians decompose into blocks of at most three states.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::fock::{OperatorMatrix, StateVector};
use crate::{Error, Result, Tolerances, C64};

#[derive(Debug, Clone)]
pub struct Propagator {
    generator: OperatorMatrix,
    energies: DVector<f64>,
    eigenvectors: DMatrix<C64>,
}

impl Propagator {
    pub fn new(generator: &OperatorMatrix) -> Result<Self> {
        Self::with_tolerance(generator, Tolerances::default().hermiticity)
    }

    /// Rejects generators with `max |H − H†| ≥ tol`, then symmetrizes to `(H + H†)/2`.
    pub fn with_tolerance(generator: &OperatorMatrix, tol: f64) -> Result<Self> {
        let deviation = generator.hermiticity_error();
        if deviation >= tol {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: tol,
            });
        }
        let h = generator.entries();
        let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
        let generator = OperatorMatrix::hermitian(generator.space(), sym.clone(), f64::INFINITY)?;
        let (energies, eigenvectors) = hermitian_eigen(&sym)?;
        Ok(Propagator {
            generator,
            energies,
            eigenvectors,
        })
    }

    pub fn generator(&self) -> &OperatorMatrix {
        &self.generator
    }

    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    /// `max |V diag(ε) V† − H|`.
    pub fn reconstruction_error(&self) -> f64 {
        let d = DMatrix::from_diagonal(&self.energies.map(|e| C64::new(e, 0.0)));
        let rebuilt = &self.eigenvectors * d * self.eigenvectors.adjoint();
        crate::fock::operator_max_abs(&(rebuilt - self.generator.entries()))
    }

    pub fn unitary(&self, t: f64) -> OperatorMatrix {
        let phases = self.energies.map(|e| C64::from_polar(1.0, -e * t));
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (mut col, ph) in scaled.column_iter_mut().zip(phases.iter()) {
            col *= *ph;
        }
        OperatorMatrix::new(self.generator.space(), scaled * v.adjoint())
            .expect("propagator keeps the generator's dimension")
    }

    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        if psi.space() != self.generator.space() {
            return Err(Error::Dimension(
                "state and generator live in different spaces".into(),
            ));
        }
        // V e^{−iεt} V† ψ without forming U
        let mut coeffs = self.eigenvectors.adjoint() * psi.amplitudes();
        for (z, e) in coeffs.iter_mut().zip(self.energies.iter()) {
            *z *= C64::from_polar(1.0, -e * t);
        }
        StateVector::from_vector(psi.space(), &self.eigenvectors * coeffs)
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn energy(&self, psi: &StateVector) -> Result<f64> {
        Ok(psi.inner(&self.generator.apply(psi)?)?.re)
    }
}

/// Eigendecomposition of a Hermitian matrix, block by block.
fn hermitian_eigen(h: &DMatrix<C64>) -> Result<(DVector<f64>, DMatrix<C64>)> {
    let n = h.nrows();
    let mut energies = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    let mut col = 0;
    for block in coupled_blocks(h) {
        let sub = DMatrix::from_fn(block.len(), block.len(), |i, j| h[(block[i], block[j])]);
        let (e, v) = block_eigen(sub)?;
        for k in 0..block.len() {
            energies[col] = e[k];
            for (i, &row) in block.iter().enumerate() {
                vectors[(row, col)] = v[(i, k)];
            }
            col += 1;
        }
    }
    Ok((energies, vectors))
}

/// Connected components of the graph with an edge wherever `h_ij ≠ 0`.
fn coupled_blocks(h: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = h.nrows();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut block = vec![start];
        let mut next = 0;
        while next < block.len() {
            let i = block[next];
            next += 1;
            for j in 0..n {
                if !seen[j] && (h[(i, j)] != C64::new(0.0, 0.0) || h[(j, i)] != C64::new(0.0, 0.0)) {
                    seen[j] = true;
                    block.push(j);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks
}

fn block_eigen(sub: DMatrix<C64>) -> Result<(DVector<f64>, DMatrix<C64>)> {
    let n = sub.nrows();
    if n == 1 {
        return Ok((DVector::from_element(1, sub[(0, 0)].re), DMatrix::identity(1, 1)));
    }
    let eig = SymmetricEigen::new(sub.clone());
    if decomposition_ok(&sub, &eig.eigenvalues, &eig.eigenvectors) {
        return Ok((eig.eigenvalues, eig.eigenvectors));
    }
    // the complex tridiagonalization can break down on sparse blocks;
    // a dense unitary change of basis removes the structural zeros
    let q = dense_unitary(n);
    let eig = SymmetricEigen::new(&q * &sub * q.adjoint());
    let vectors = q.adjoint() * eig.eigenvectors;
    if decomposition_ok(&sub, &eig.eigenvalues, &vectors) {
        return Ok((eig.eigenvalues, vectors));
    }
    Err(Error::Dimension(format!(
        "eigendecomposition of a {n}×{n} generator block did not converge"
    )))
}

fn decomposition_ok(h: &DMatrix<C64>, energies: &DVector<f64>, vectors: &DMatrix<C64>) -> bool {
    if energies.iter().any(|e| !e.is_finite()) || vectors.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return false;
    }
    let d = DMatrix::from_diagonal(&energies.map(|e| C64::new(e, 0.0)));
    let scale = crate::fock::operator_max_abs(h).max(1.0);
    let rebuilt = vectors * d * vectors.adjoint();
    crate::fock::operator_max_abs(&(rebuilt - h)) <= 1e-12 * scale * h.nrows() as f64
}

/// Fixed, fully dense unitary of size `n` (Q factor of a low-discrepancy matrix).
fn dense_unitary(n: usize) -> DMatrix<C64> {
    let a = DMatrix::from_fn(n, n, |i, j| {
        let k = (i * n + j + 1) as f64;
        C64::new((k * 0.754_877_666_246_692_7).fract() - 0.5, (k * 0.569_840_290_998_053_3).fract() - 0.5)
    });
    a.qr().q()
}

/// `e^{−iHt}`.
pub fn unitary_of(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    if !t.is_finite() {
        return Err(Error::param("t", "evolution time must be finite"));
    }
    Ok(Propagator::new(h)?.unitary(t))
}

/// `e^{−iHt} ψ`.
pub fn evolve(psi: &StateVector, h: &OperatorMatrix, t: f64) -> Result<StateVector> {
    if !t.is_finite() {
        return Err(Error::param("t", "evolution time must be finite"));
    }
    Propagator::new(h)?.evolve(psi, t)
}

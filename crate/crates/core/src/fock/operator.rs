// SPDX-License-Identifier: Apache-2.0

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use super::{HilbertSpace, Level, StateVector};
use crate::{Error, Result, C64};

/// Dense complex operator on a joint [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    space: HilbertSpace,
    entries: DMatrix<C64>,
    hermitian: Option<bool>,
}

impl OperatorMatrix {
    pub fn new(space: HilbertSpace, entries: DMatrix<C64>) -> Result<Self> {
        let d = space.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::Dimension(format!(
                "operator is {}x{}, space has dimension {d}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(OperatorMatrix {
            space,
            entries,
            hermitian: None,
        })
    }

    /// Builds an operator that is asserted Hermitian within `tol`.
    pub fn hermitian(space: HilbertSpace, entries: DMatrix<C64>, tol: f64) -> Result<Self> {
        let mut op = Self::new(space, entries)?;
        let deviation = op.hermiticity_error();
        if deviation >= tol {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: tol,
            });
        }
        op.hermitian = Some(true);
        Ok(op)
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        let d = space.dim();
        OperatorMatrix {
            space,
            entries: DMatrix::zeros(d, d),
            hermitian: Some(true),
        }
    }

    pub fn identity(space: HilbertSpace) -> Self {
        let d = space.dim();
        OperatorMatrix {
            space,
            entries: DMatrix::identity(d, d),
            hermitian: Some(true),
        }
    }

    /// `|a, n⟩⟨b, n'|` on the joint space.
    pub fn outer(space: HilbertSpace, ket: (Level, usize), bra: (Level, usize)) -> Result<Self> {
        let i = space.index(ket.0, ket.1)?;
        let j = space.index(bra.0, bra.1)?;
        let mut op = Self::zeros(space);
        op.entries[(i, j)] = C64::new(1.0, 0.0);
        op.hermitian = Some(i == j);
        Ok(op)
    }

    /// `X ⊗ I` with the spin flip `|g⟩⟨e| + |e⟩⟨g|`; any further atomic
    /// levels are left untouched.
    pub fn spin_flip(space: HilbertSpace) -> Self {
        let n = space.fock_cutoff();
        let mut op = Self::identity(space);
        for k in 0..n {
            op.entries[(k, k)] = C64::new(0.0, 0.0);
            op.entries[(n + k, n + k)] = C64::new(0.0, 0.0);
            op.entries[(k, n + k)] = C64::new(1.0, 0.0);
            op.entries[(n + k, k)] = C64::new(1.0, 0.0);
        }
        op
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn get(&self, ket: (Level, usize), bra: (Level, usize)) -> Result<C64> {
        Ok(self.entries[(
            self.space.index(ket.0, ket.1)?,
            self.space.index(bra.0, bra.1)?,
        )])
    }

    /// `Some(true)` when the constructor verified Hermiticity.
    pub fn hermitian_flag(&self) -> Option<bool> {
        self.hermitian
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() < tol
    }

    /// `max |U†U - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.space.dim();
        max_abs(&(self.entries.adjoint() * &self.entries - DMatrix::<C64>::identity(d, d)))
    }

    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            space: self.space,
            entries: self.entries.adjoint(),
            hermitian: self.hermitian,
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        OperatorMatrix {
            space: self.space,
            entries: &self.entries * factor,
            hermitian: None,
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        OperatorMatrix {
            space: self.space,
            entries: &self.entries * C64::new(factor, 0.0),
            hermitian: self.hermitian,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(OperatorMatrix {
            space: self.space,
            entries: &self.entries + &other.entries,
            hermitian: both_hermitian(self, other),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(OperatorMatrix {
            space: self.space,
            entries: &self.entries - &other.entries,
            hermitian: both_hermitian(self, other),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(OperatorMatrix {
            space: self.space,
            entries: &self.entries * &other.entries,
            hermitian: None,
        })
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(OperatorMatrix {
            space: self.space,
            entries: &self.entries * &other.entries - &other.entries * &self.entries,
            hermitian: None,
        })
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        max_abs(&self.entries)
    }

    /// `max |A - B|` entrywise.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_space(other)?;
        Ok(max_abs(&(&self.entries - &other.entries)))
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.space() != self.space {
            return Err(Error::Dimension(
                "operator and state live in different spaces".into(),
            ));
        }
        StateVector::from_vector(self.space, &self.entries * psi.amplitudes())
    }

    /// Number of entries with modulus above `threshold`.
    pub fn count_nonzero(&self, threshold: f64) -> usize {
        self.entries.iter().filter(|z| z.norm() > threshold).count()
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Dimension(format!(
                "operators on {:?} and {:?}",
                self.space, other.space
            )));
        }
        Ok(())
    }
}

fn both_hermitian(a: &OperatorMatrix, b: &OperatorMatrix) -> Option<bool> {
    match (a.hermitian, b.hermitian) {
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: Self) -> OperatorMatrix {
        self.try_add(rhs).expect("operator spaces differ")
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: Self) -> OperatorMatrix {
        self.try_sub(rhs).expect("operator spaces differ")
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: Self) -> OperatorMatrix {
        self.try_mul(rhs).expect("operator spaces differ")
    }
}

/// Truncated annihilation operator: `⟨n-1|a|n⟩ = √n` for `1 ≤ n < cutoff`.
pub fn annihilation_op(cutoff: usize) -> Result<DMatrix<C64>> {
    if cutoff < 2 {
        return Err(Error::CutoffTooSmall {
            cutoff,
            required: 2,
        });
    }
    let mut a = DMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Ok(a)
}

pub fn creation_op(cutoff: usize) -> Result<DMatrix<C64>> {
    Ok(annihilation_op(cutoff)?.adjoint())
}

/// `|i⟩⟨j|` on an `atom_dim`-level atom.
pub fn atomic_sigma(i: Level, j: Level, atom_dim: usize) -> Result<DMatrix<C64>> {
    let r = i.check(atom_dim)?;
    let c = j.check(atom_dim)?;
    let mut m = DMatrix::zeros(atom_dim, atom_dim);
    m[(r, c)] = C64::new(1.0, 0.0);
    Ok(m)
}

/// Kronecker product `atomic ⊗ oscillator` in atom-major ordering.
pub fn tensor(atomic: &DMatrix<C64>, oscillator: &DMatrix<C64>) -> Result<OperatorMatrix> {
    if !atomic.is_square() || !oscillator.is_square() {
        return Err(Error::Dimension("tensor factors must be square".into()));
    }
    let space = HilbertSpace::new(atomic.nrows(), oscillator.nrows())?;
    OperatorMatrix::new(space, atomic.kronecker(oscillator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::StateVector;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn fock_ket(cutoff: usize, n: usize) -> nalgebra::DVector<C64> {
        let mut v = nalgebra::DVector::zeros(cutoff);
        v[n] = c(1.0);
        v
    }

    #[test]
    fn annihilation_examples() {
        let a = annihilation_op(6).unwrap();
        assert!((&a * fock_ket(6, 0)).iter().all(|z| z.norm() == 0.0));
        assert_eq!(&a * fock_ket(6, 1), fock_ket(6, 0));
        assert_eq!(&a * fock_ket(6, 4), fock_ket(6, 3) * c(2.0));
        assert!(matches!(
            annihilation_op(1),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn number_operator_and_commutator_below_guard() {
        let n_max = 7;
        let a = annihilation_op(n_max).unwrap();
        let ad = creation_op(n_max).unwrap();
        let num = &ad * &a;
        for n in 0..n_max - 1 {
            let out = &num * fock_ket(n_max, n);
            assert!((out - fock_ket(n_max, n) * c(n as f64)).norm() < 1e-12);
        }
        let comm = &a * &ad - &ad * &a;
        for i in 0..n_max - 1 {
            for j in 0..n_max - 1 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((comm[(i, j)] - c(expected)).norm() < 1e-12);
            }
        }
        // truncation shows up only on the guard level
        assert!((comm[(n_max - 1, n_max - 1)] - c(-(n_max as f64 - 1.0))).norm() < 1e-12);
    }

    #[test]
    fn sigma_examples() {
        let ge = atomic_sigma(Level::G, Level::E, 2).unwrap();
        let g = nalgebra::DVector::from_vec(vec![c(1.0), c(0.0)]);
        let e = nalgebra::DVector::from_vec(vec![c(0.0), c(1.0)]);
        assert_eq!(&ge * &e, g);
        assert!((&ge * &g).iter().all(|z| z.norm() == 0.0));
        let sx = &ge + atomic_sigma(Level::E, Level::G, 2).unwrap();
        let plus = (&g + &e) * c(std::f64::consts::FRAC_1_SQRT_2);
        assert!((&sx * &plus - &plus).norm() < 1e-15);
        assert!(matches!(
            atomic_sigma(Level::H, Level::G, 2),
            Err(Error::Label { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        let s = HilbertSpace::qubit(5).unwrap();
        let id = tensor(&DMatrix::identity(2, 2), &DMatrix::identity(5, 5)).unwrap();
        assert_eq!(id.max_abs_diff(&OperatorMatrix::identity(s)).unwrap(), 0.0);

        let ge = atomic_sigma(Level::G, Level::E, 2).unwrap();
        let ad = creation_op(5).unwrap();
        let op = tensor(&ge, &ad).unwrap();
        let out = op.apply(&StateVector::basis(s, Level::E, 0).unwrap()).unwrap();
        assert!(out.fidelity(&StateVector::basis(s, Level::G, 1).unwrap()).unwrap() > 1.0 - 1e-15);

        // a second exchange from |e,n⟩ vanishes: σ_ge σ_ge = 0
        let sq = &op * &op;
        for n in 0..5 {
            let v = sq.apply(&StateVector::basis(s, Level::E, n).unwrap()).unwrap();
            assert!(v.amplitudes().iter().all(|z| z.norm() == 0.0));
        }
        assert_eq!(sq.count_nonzero(0.0), 0);
    }

    #[test]
    fn spin_flip_matches_tensor_form() {
        let s = HilbertSpace::three_level(4).unwrap();
        let sx = &atomic_sigma(Level::G, Level::E, 3).unwrap()
            + atomic_sigma(Level::E, Level::G, 3).unwrap()
            + atomic_sigma(Level::H, Level::H, 3).unwrap();
        let expected = tensor(&sx, &DMatrix::identity(4, 4)).unwrap();
        assert_eq!(OperatorMatrix::spin_flip(s).max_abs_diff(&expected).unwrap(), 0.0);
    }

    #[test]
    fn hermitian_constructor_rejects() {
        let s = HilbertSpace::qubit(2).unwrap();
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 1)] = c(1.0);
        assert!(matches!(
            OperatorMatrix::hermitian(s, m, 1e-12),
            Err(Error::NotHermitian { .. })
        ));
    }
}

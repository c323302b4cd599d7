// SPDX-License-Identifier: Apache-2.0

use nalgebra::DVector;

use super::{HilbertSpace, Level};
use crate::{Error, Result, C64};

/// Pure state on a joint atom ⊗ oscillator space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: HilbertSpace,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(space: HilbertSpace, amplitudes: Vec<C64>) -> Result<Self> {
        Self::from_vector(space, DVector::from_vec(amplitudes))
    }

    pub fn from_vector(space: HilbertSpace, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::Dimension(format!(
                "state has {} amplitudes, space has dimension {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::param("amplitudes", "non-finite amplitude"));
        }
        Ok(StateVector { space, amplitudes })
    }

    /// `|level, n⟩`.
    pub fn basis(space: HilbertSpace, level: Level, n: usize) -> Result<Self> {
        let mut v = DVector::zeros(space.dim());
        v[space.index(level, n)?] = C64::new(1.0, 0.0);
        Ok(StateVector {
            space,
            amplitudes: v,
        })
    }

    /// `|atom⟩ ⊗ |oscillator⟩`; `atomic` lists amplitudes on `g, e, (h)`.
    pub fn product(atomic: &[C64], oscillator: &OscillatorState) -> Result<Self> {
        let space = HilbertSpace::new(atomic.len(), oscillator.cutoff())?;
        let amplitudes = DVector::from_vec(atomic.to_vec()).kronecker(oscillator.amplitudes());
        Self::from_vector(space, amplitudes)
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, level: Level, n: usize) -> Result<C64> {
        Ok(self.amplitudes[self.space.index(level, n)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::Unnormalized { norm_sqr: 0.0 });
        }
        Ok(StateVector {
            space: self.space,
            amplitudes: &self.amplitudes / C64::new(norm, 0.0),
        })
    }

    pub fn require_normalized(&self, tol: f64) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > tol {
            return Err(Error::Unnormalized { norm_sqr });
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::Dimension("states live in different spaces".into()));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        fidelity(self, other)
    }

    /// Population of Fock level `n`, summed over atomic levels.
    pub fn fock_population(&self, n: usize) -> f64 {
        let cutoff = self.space.fock_cutoff();
        (0..self.space.atom_dim())
            .map(|a| self.amplitudes[a * cutoff + n].norm_sqr())
            .sum()
    }

    pub fn fock_populations(&self) -> Vec<f64> {
        (0..self.space.fock_cutoff())
            .map(|n| self.fock_population(n))
            .collect()
    }

    pub fn level_population(&self, level: Level) -> Result<f64> {
        let a = level.check(self.space.atom_dim())?;
        let cutoff = self.space.fock_cutoff();
        Ok(self
            .amplitudes
            .rows(a * cutoff, cutoff)
            .iter()
            .map(|z| z.norm_sqr())
            .sum())
    }

    /// Population on the guard level `fock_cutoff - 1`.
    pub fn guard_population(&self) -> f64 {
        self.fock_population(self.space.guard_level())
    }

    /// Same state with the atomic factor embedded into a larger atom
    /// (e.g. a two-level state viewed in the three-level space).
    pub fn embed_atom(&self, atom_dim: usize) -> Result<Self> {
        if atom_dim < self.space.atom_dim() {
            return Err(Error::Dimension(format!(
                "cannot embed a {}-level atom into {atom_dim} levels",
                self.space.atom_dim()
            )));
        }
        let space = HilbertSpace::new(atom_dim, self.space.fock_cutoff())?;
        let mut v = DVector::zeros(space.dim());
        v.rows_mut(0, self.amplitudes.len())
            .copy_from(&self.amplitudes);
        Self::from_vector(space, v)
    }
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Pure oscillator-only state on Fock levels `0..cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorState {
    amplitudes: DVector<C64>,
}

impl OscillatorState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(amplitudes))
    }

    pub fn from_vector(amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::CutoffTooSmall {
                cutoff: amplitudes.len(),
                required: 2,
            });
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::param("amplitudes", "non-finite amplitude"));
        }
        Ok(OscillatorState { amplitudes })
    }

    pub fn fock(cutoff: usize, n: usize) -> Result<Self> {
        if n >= cutoff {
            return Err(Error::Dimension(format!(
                "Fock level {n} outside cutoff {cutoff}"
            )));
        }
        let mut v = DVector::zeros(cutoff);
        v[n] = C64::new(1.0, 0.0);
        Self::from_vector(v)
    }

    /// `α|lower⟩ + β|upper⟩`.
    pub fn pair(cutoff: usize, lower: usize, upper: usize, alpha: C64, beta: C64) -> Result<Self> {
        if upper >= cutoff || lower >= upper {
            return Err(Error::Dimension(format!(
                "pair ({lower}, {upper}) not inside cutoff {cutoff}"
            )));
        }
        let mut v = DVector::zeros(cutoff);
        v[lower] = alpha;
        v[upper] = beta;
        Self::from_vector(v)
    }

    pub fn cutoff(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> C64 {
        self.amplitudes[n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn require_normalized(&self, tol: f64) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if (norm_sqr - 1.0).abs() > tol {
            return Err(Error::Unnormalized { norm_sqr });
        }
        Ok(())
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::Unnormalized { norm_sqr: 0.0 });
        }
        Self::from_vector(&self.amplitudes / C64::new(norm, 0.0))
    }

    /// Highest level with population above `threshold`, if any.
    pub fn support_top(&self, threshold: f64) -> Option<usize> {
        self.amplitudes
            .iter()
            .rposition(|z| z.norm_sqr() > threshold)
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.cutoff() != other.cutoff() {
            return Err(Error::Dimension(format!(
                "oscillator cutoffs {} and {} differ",
                self.cutoff(),
                other.cutoff()
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn guard_population(&self) -> f64 {
        self.amplitudes[self.cutoff() - 1].norm_sqr()
    }

    /// Same amplitudes in a space with a different cutoff. Truncating away
    /// populated levels is an error.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        if let Some(top) = self.support_top(0.0) {
            if top >= cutoff {
                return Err(Error::CutoffTooSmall {
                    cutoff,
                    required: top + 1,
                });
            }
        }
        let mut v = DVector::zeros(cutoff);
        let n = cutoff.min(self.cutoff());
        v.rows_mut(0, n).copy_from(&self.amplitudes.rows(0, n));
        Self::from_vector(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn fidelity_examples() {
        let s = HilbertSpace::qubit(4).unwrap();
        let zero = StateVector::basis(s, Level::G, 0).unwrap();
        let one = StateVector::basis(s, Level::G, 1).unwrap();
        assert_eq!(fidelity(&zero, &zero).unwrap(), 1.0);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        let other = StateVector::basis(HilbertSpace::qubit(5).unwrap(), Level::G, 0).unwrap();
        assert!(matches!(fidelity(&zero, &other), Err(Error::Dimension(_))));
    }

    #[test]
    fn product_and_populations() {
        let osc = OscillatorState::pair(5, 1, 2, c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = StateVector::product(&[c(h, 0.0), c(h, 0.0)], &osc).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((psi.fock_population(1) - 0.36).abs() < 1e-15);
        assert!((psi.level_population(Level::E).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(psi.guard_population(), 0.0);
        assert!((psi.amplitude(Level::E, 2).unwrap() - c(0.0, 0.8 * h)).norm() < 1e-15);
    }

    #[test]
    fn normalize_and_reject() {
        let s = HilbertSpace::qubit(2).unwrap();
        let psi = StateVector::new(s, vec![c(3.0, 0.0), c(0.0, 4.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(psi.require_normalized(1e-12).is_err());
        let n = psi.normalize().unwrap();
        assert!((n.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(StateVector::new(s, vec![c(f64::NAN, 0.0); 4]).is_err());
        assert!(StateVector::new(s, vec![c(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn embedding_keeps_amplitudes() {
        let s = HilbertSpace::qubit(3).unwrap();
        let psi = StateVector::basis(s, Level::E, 2).unwrap();
        let big = psi.embed_atom(3).unwrap();
        assert_eq!(big.amplitude(Level::E, 2).unwrap(), c(1.0, 0.0));
        assert_eq!(big.level_population(Level::H).unwrap(), 0.0);
    }

    fn arb_state(dim: usize) -> impl Strategy<Value = Vec<C64>> {
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim)
            .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
            .prop_map(|v| v.into_iter().map(|(a, b)| C64::new(a, b)).collect())
    }

    proptest! {
        #[test]
        fn fidelity_symmetric_and_phase_invariant(
            a in arb_state(8), b in arb_state(8), chi in 0.0..std::f64::consts::TAU
        ) {
            let s = HilbertSpace::qubit(4).unwrap();
            let a = StateVector::new(s, a).unwrap().normalize().unwrap();
            let b = StateVector::new(s, b).unwrap().normalize().unwrap();
            let fab = fidelity(&a, &b).unwrap();
            prop_assert!((fab - fidelity(&b, &a).unwrap()).abs() < 1e-14);
            prop_assert!((-1e-15..=1.0 + 1e-12).contains(&fab));
            let rotated = StateVector::from_vector(s, a.amplitudes() * C64::from_polar(1.0, chi)).unwrap();
            prop_assert!((fidelity(&a, &rotated).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

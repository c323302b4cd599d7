// SPDX-License-Identifier: Apache-2.0

//! Joint atom ⊗ truncated-oscillator bookkeeping.
//!
//! Basis ordering is atom-major: the joint index of `|a, n⟩` is
//! `a * fock_cutoff + n`. Tracing out the atom is then a sum of contiguous
//! `fock_cutoff`-sized blocks.

mod density;
mod operator;
mod state;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use density::{reduced_oscillator_state, DensityMatrix};
pub(crate) use operator::max_abs as operator_max_abs;
pub use operator::{annihilation_op, atomic_sigma, creation_op, tensor, OperatorMatrix};
pub use state::{fidelity, OscillatorState, StateVector};

/// Atomic level. `G` and `E` carry the qubit of the auxiliary atom; `H` is the
/// far-detuned intermediate level of the Raman scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    G,
    E,
    H,
}

impl Level {
    pub fn index(self) -> usize {
        match self {
            Level::G => 0,
            Level::E => 1,
            Level::H => 2,
        }
    }

    pub(crate) fn check(self, atom_dim: usize) -> Result<usize> {
        let i = self.index();
        if i < atom_dim {
            Ok(i)
        } else {
            Err(Error::Label {
                label: self.to_string(),
                atom_dim,
            })
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::G => "g",
            Level::E => "e",
            Level::H => "h",
        })
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" => Ok(Level::G),
            "e" => Ok(Level::E),
            "h" => Ok(Level::H),
            other => Err(Error::Label {
                label: other.to_string(),
                atom_dim: 3,
            }),
        }
    }
}

/// Joint atom ⊗ oscillator space with Fock states `0..fock_cutoff`.
///
/// The top retained level `fock_cutoff - 1` is the guard level: population
/// there signals truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct HilbertSpace {
    atom_dim: usize,
    fock_cutoff: usize,
}

#[derive(Deserialize)]
struct RawSpace {
    atom_dim: usize,
    fock_cutoff: usize,
}

impl TryFrom<RawSpace> for HilbertSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        HilbertSpace::new(raw.atom_dim, raw.fock_cutoff)
    }
}

impl HilbertSpace {
    pub fn new(atom_dim: usize, fock_cutoff: usize) -> Result<Self> {
        if atom_dim < 2 {
            return Err(Error::Dimension(format!(
                "atom_dim must be at least 2, got {atom_dim}"
            )));
        }
        if fock_cutoff < 2 {
            return Err(Error::CutoffTooSmall {
                cutoff: fock_cutoff,
                required: 2,
            });
        }
        Ok(HilbertSpace {
            atom_dim,
            fock_cutoff,
        })
    }

    /// Two-level atom (`g`, `e`) space of the effective model.
    pub fn qubit(fock_cutoff: usize) -> Result<Self> {
        Self::new(2, fock_cutoff)
    }

    /// Three-level atom (`g`, `e`, `h`) space of the full Raman model.
    pub fn three_level(fock_cutoff: usize) -> Result<Self> {
        Self::new(3, fock_cutoff)
    }

    pub fn atom_dim(&self) -> usize {
        self.atom_dim
    }

    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    pub fn dim(&self) -> usize {
        self.atom_dim * self.fock_cutoff
    }

    pub fn guard_level(&self) -> usize {
        self.fock_cutoff - 1
    }

    /// Joint index of `|level, n⟩`.
    pub fn index(&self, level: Level, n: usize) -> Result<usize> {
        let a = level.check(self.atom_dim)?;
        if n >= self.fock_cutoff {
            return Err(Error::Dimension(format!(
                "Fock level {n} outside cutoff {}",
                self.fock_cutoff
            )));
        }
        Ok(a * self.fock_cutoff + n)
    }

    pub(crate) fn require_atom_dim(&self, atom_dim: usize) -> Result<()> {
        if self.atom_dim != atom_dim {
            return Err(Error::Dimension(format!(
                "expected a {atom_dim}-level atom, space has {}",
                self.atom_dim
            )));
        }
        Ok(())
    }

    pub(crate) fn require_cutoff(&self, required: usize) -> Result<()> {
        if self.fock_cutoff < required {
            return Err(Error::CutoffTooSmall {
                cutoff: self.fock_cutoff,
                required,
            });
        }
        Ok(())
    }
}

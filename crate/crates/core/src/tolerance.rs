// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

/// Numerical bounds used by checks and constructors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Entrywise bound for algebraic identities between explicitly built matrices.
    pub algebraic: f64,
    /// Bound for identities that go through an eigendecomposition (unitarity,
    /// conjugated exponentials, composition).
    pub propagation: f64,
    /// Allowed infidelity `1 - F` for exact-equivalence checks.
    pub fidelity: f64,
    /// Maximum `|H - H†|` accepted for a generator before symmetrization.
    pub hermiticity: f64,
    /// Allowed deviation of the squared norm from 1 for inputs that must be normalized.
    pub normalization: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: 1e-12,
            propagation: 1e-10,
            fidelity: 1e-9,
            hermiticity: 1e-10,
            normalization: 1e-9,
        }
    }
}

// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown atomic level `{label}` for a {atom_dim}-level atom")]
    Label { label: String, atom_dim: usize },

    #[error("generator is not Hermitian: max |H - H†| = {deviation:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("state is not normalized: squared norm {norm_sqr}")]
    Unnormalized { norm_sqr: f64 },

    #[error("Fock cutoff {cutoff} too small: at least {required} levels needed")]
    CutoffTooSmall { cutoff: usize, required: usize },

    #[error("infeasible doublet: m = {m} is below k = {k}")]
    InfeasibleDoublet { m: usize, k: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("infeasible target: {0}")]
    InfeasibleTarget(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

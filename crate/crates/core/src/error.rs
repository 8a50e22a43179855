use thiserror::Error;

use crate::fock::FockIndex;

/// Errors produced while building operators or evaluating distances.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cutoff must be at least 1, got {0}")]
    CutoffTooSmall(usize),

    #[error("hbar must be positive and finite, got {0}")]
    InvalidHbar(f64),

    #[error("phase-space parameters need mu*nu <= hbar^2 (hbar = {hbar}, mu = {mu}, nu = {nu})")]
    InvalidPhaseSpace { hbar: f64, mu: f64, nu: f64 },

    #[error("operands live on different bases (cutoff {left} vs {right})")]
    BasisMismatch { left: usize, right: usize },

    #[error("matrix is {rows}x{cols}, basis needs {dim}x{dim}")]
    ShapeMismatch { rows: usize, cols: usize, dim: usize },

    #[error("element is not Hermitian (max |A - A^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("coefficient vector has length {got}, basis dimension is {expected}")]
    CoefficientLength { got: usize, expected: usize },

    #[error("non-finite coefficient at state {0}")]
    NonFiniteCoefficient(FockIndex),

    #[error("state {state} lies outside the basis with cutoff {cutoff}")]
    StateOutsideBasis { state: FockIndex, cutoff: usize },

    #[error("truncation unsafe: cutoff {cutoff} is below the required {required}")]
    TruncationUnsafe { cutoff: usize, required: usize },

    #[error("states coincide at {0}; their distance is trivially zero")]
    IdenticalStates(FockIndex),

    #[error("states {first} and {second} are adjacent; the far-pair element needs |dn1| + |dn2| >= 2")]
    NotFarPair { first: FockIndex, second: FockIndex },

    #[error("states {first} and {second} are not adjacent")]
    NotAdjacentPair { first: FockIndex, second: FockIndex },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidHbar(hbar))
    }
}

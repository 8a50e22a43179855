//! Spectral triple of the four-dimensional quantum phase space: Dirac
//! matrices, the Dirac operator on `F ⊗ C⁴`, the ball condition and the
//! superoperator representation of the extended phase space.
//!
//! For a Hermitian element `e` the commutator `[D, π(e)]` collapses onto the
//! `2×2` block [`DiracBlock`], and `‖[D, π(e)]‖ = sqrt(2/ħ) ‖D1(e)‖`. The
//! [`ball_norm`] entry point uses that reduction; `DiracOperator::commutator_with`
//! keeps the full four-slot route around for cross-checks.

mod ball;
mod dirac;
mod gamma;
mod phase_space;

pub use ball::{ball_norm, d1_block, largest_eigenvalue, operator_norm, BallNorm, DiracBlock};
pub use dirac::{dirac_operator, DiracOperator};
pub use gamma::{build_gammas, GammaSet};
pub use phase_space::{
    phase_space_generator, verify_phase_space_rep, CommutatorCheck, Generator, PhaseSpaceParams, PhaseSpaceReport,
    Superoperator,
};

//! Connes spectral distances between Fock states of the two-dimensional
//! harmonic oscillator.
//!
//! The spectral triple lives on `F ⊗ C⁴`, with `F` the two-mode Fock space
//! truncated to a box `n1, n2 ≤ N`:
//!
//! * [`fock`]: basis, ladder operators and quadratures;
//! * [`spectral`]: Dirac matrices, the Dirac operator, the ball condition
//!   `‖[D, π(e)]‖ ≤ 1` and the phase-space superoperators;
//! * [`distance`]: three routes to `d(ω_a, ω_b) = sup_{e ∈ B} |ω_a(e) - ω_b(e)|`
//!   (closed form, two-point ansatz, numeric supremum) and metric checks;
//! * [`verify`]: named invariant suites used by the command-line tool.
//!
//! ```
//! use spectral_distance::distance::{closed_form_distance, StatePair};
//! use spectral_distance::fock::FockIndex;
//!
//! let pair = StatePair::new(FockIndex::new(1, 0), FockIndex::VACUUM);
//! let d = closed_form_distance(pair, 1.0).unwrap();
//! assert!((d.value - 0.5f64.sqrt()).abs() < 1e-15);
//! ```

pub mod distance;
pub mod error;
pub mod fock;
pub mod spectral;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};

//! Spectral distances between pure Fock states.
//!
//! Three routes are provided:
//!
//! * [`closed_form_distance`]: the four-branch formula built from two-point
//!   elements `c ρ_first + d ρ_second` whose coefficients are fixed by the
//!   diagonal entries of `D1†D1`;
//! * [`ansatz_distance`]: the same two-point family, but with the coefficients
//!   chosen under the full operator-norm ball condition;
//! * [`numeric_distance`]: a supremum over every real diagonal element supported
//!   near the two states, found by ratio maximization with random restarts.
//!
//! The closed form only imposes the diagonal entries of `D1†D1`, which are
//! necessary but not sufficient for the ball condition. The optimal-element
//! constructors report whether their element actually saturates the ball;
//! see [`DistanceResult::saturated`].

mod ansatz;
mod closed_form;
mod element;
mod metric;
mod numeric;
mod optimal;
mod smoothing;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fock::FockIndex;

pub use ansatz::{ansatz_distance, ansatz_optimum, AnsatzOptimum};
pub use closed_form::{adjacent_distance, classify, closed_form_distance, closed_form_value, far_distance, Branch};
pub use element::DiagonalElement;
pub use metric::{asymptotic_check, verify_triangle, AsymptoticReport, TriangleReport};
pub use numeric::{numeric_distance, numeric_supremum, NumericOptimum, NumericOptions};
pub use optimal::{optimal_element, optimal_element_adjacent, optimal_element_far};

/// Two pure Fock states `ω_first`, `ω_second`; `Δρ = ρ_first - ρ_second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StatePair {
    pub first: FockIndex,
    pub second: FockIndex,
}

impl StatePair {
    pub const fn new(first: FockIndex, second: FockIndex) -> Self {
        Self { first, second }
    }

    pub const fn swapped(&self) -> Self {
        Self { first: self.second, second: self.first }
    }

    pub fn is_diagonal(&self) -> bool {
        self.first == self.second
    }

    /// Largest occupation number appearing in either state.
    pub fn max_occupation(&self) -> usize {
        self.first.max_occupation().max(self.second.max_occupation())
    }
}

impl fmt::Display for StatePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) vs ({})", self.first, self.second)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Ansatz,
    Numeric,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Ansatz => "ansatz",
            Method::Numeric => "numeric",
        })
    }
}

/// Distance value (in units where `hbar` enters as `sqrt(hbar)`) with the
/// element that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: f64,
    pub method: Method,
    /// Coefficients `(c, d)` of the optimal element on `(first, second)`.
    pub coefficients: Option<(f64, f64)>,
    /// Whether the optimal element sits on the ball boundary, `|ball_norm - 1| <= 1e-8`.
    pub saturated: bool,
    pub truncation_safe: bool,
}

//! Numerical tolerances shared by the library, the verification suites and
//! the tests.

/// Largest `|e - e†|` entry accepted for a "Hermitian" algebra element.
pub const HERMITIAN_INPUT: f64 = 1e-12;

/// Per-mode gap between an element's support and the cutoff that makes the
/// commutator blocks `[a_i, e]` free of truncation error.
pub const SUPPORT_MARGIN: usize = 2;

/// Deviation allowed when checking the phase-space commutation relations on
/// interior matrix units.
pub const PHASE_SPACE_COMMUTATOR: f64 = 1e-12;

/// `|ball_norm - 1|` below which an optimal element counts as saturating the ball.
pub const SATURATION: f64 = 1e-8;

/// Agreement demanded between the ansatz optimizer and the closed form.
pub const ANSATZ_VS_CLOSED: f64 = 1e-6;

/// Agreement demanded between the numeric supremum and the closed form.
pub const NUMERIC_VS_CLOSED: f64 = 1e-4;

/// Allowed change of the numeric supremum when the support pad grows 2 → 4.
pub const SUPPORT_EXTENSION: f64 = 1e-6;

/// Closed-form reproduction of the ground-mode adjacent distance.
pub const CLOSED_FORM_EXACT: f64 = 1e-12;

/// Slack for floating-point ties in the triangle inequality.
pub const TRIANGLE_SLACK: f64 = 1e-12;

/// Stop coordinate ascent once a full sweep improves the ratio by less than this.
pub const SWEEP_IMPROVEMENT: f64 = 1e-10;

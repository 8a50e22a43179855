//! Runs the Rust listings of the guide in `book/` as doc-tests, one module per
//! chapter so a failure points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fock-space.md")]
pub mod fock_space {}
#[doc = include_str!("../../../book/src/dirac-and-ball.md")]
pub mod dirac_and_ball {}
#[doc = include_str!("../../../book/src/distances.md")]
pub mod distances {}
#[doc = include_str!("../../../book/src/numeric-supremum.md")]
pub mod numeric_supremum {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

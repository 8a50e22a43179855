use serde::Serialize;

use super::closed_form::closed_form_value;
use super::StatePair;
use crate::error::Result;
use crate::fock::FockIndex;
use crate::tolerances::TRIANGLE_SLACK;

/// `d(A, C) <= d(A, B) + d(B, C)` for `C = (m, n)`, `B = C + (k1, l1)`,
/// `A = B + (k2, l2)`, all evaluated in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleReport {
    pub direct: f64,
    pub first_leg: f64,
    pub second_leg: f64,
    pub holds: bool,
}

pub fn verify_triangle(
    m: usize,
    n: usize,
    k1: usize,
    k2: usize,
    l1: usize,
    l2: usize,
    hbar: f64,
) -> Result<TriangleReport> {
    let c = FockIndex::new(m, n);
    let b = FockIndex::new(m + k1, n + l1);
    let a = FockIndex::new(m + k1 + k2, n + l1 + l2);
    let direct = closed_form_value(StatePair::new(a, c), hbar)?;
    let first_leg = closed_form_value(StatePair::new(b, c), hbar)?;
    let second_leg = closed_form_value(StatePair::new(a, b), hbar)?;
    let holds = direct <= first_leg + second_leg + TRIANGLE_SLACK;
    Ok(TriangleReport { direct, first_leg, second_leg, holds })
}

/// `d(|1,n>, |0,n>)` against its large-`n` form `sqrt(2ħ/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub n: usize,
    pub distance: f64,
    pub asymptote: f64,
    pub ratio: f64,
}

pub fn asymptotic_check(n: usize, hbar: f64) -> Result<AsymptoticReport> {
    let distance = closed_form_value(StatePair::new(FockIndex::new(1, n), FockIndex::new(0, n)), hbar)?;
    let asymptote = (2.0 * hbar / n as f64).sqrt();
    Ok(AsymptoticReport { n, distance, asymptote, ratio: distance / asymptote })
}

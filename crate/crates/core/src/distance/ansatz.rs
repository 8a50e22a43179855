use super::element::DiagonalElement;
use super::{DistanceResult, Method, StatePair};
use crate::error::{check_hbar, Error, Result};
use crate::fock::build_basis;
use crate::tolerances::{SATURATION, SUPPORT_MARGIN};

/// Best two-point element `c ρ_first + d ρ_second` under the full ball condition.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzOptimum {
    pub pair: StatePair,
    pub hbar: f64,
    /// Coefficients on `(first, second)`, scaled onto the ball boundary.
    pub coefficients: (f64, f64),
    /// `ball_norm` of the rescaled element.
    pub ball_norm: f64,
    pub value: f64,
    pub evaluations: usize,
}

const GOLDEN_TOL: f64 = 1e-11;

/// With `c - d` fixed to 1 the element is `t ρ_first + (t-1) ρ_second`, and its
/// ball norm `g(t)` is convex in `t`. The supremum of `c - d` over the ball is
/// `1 / min g`. Every `g` evaluation goes through the dense operator-norm oracle.
pub fn ansatz_optimum(pair: StatePair, hbar: f64) -> Result<AnsatzOptimum> {
    check_hbar(hbar)?;
    if pair.is_diagonal() {
        return Err(Error::IdenticalStates(pair.first));
    }
    let basis = build_basis(pair.max_occupation() + SUPPORT_MARGIN)?;
    let mut evaluations = 0;
    let mut g = |t: f64| -> Result<f64> {
        evaluations += 1;
        let e = DiagonalElement::from_states(basis, &[(pair.first, t), (pair.second, t - 1.0)])?;
        Ok(e.ball_norm_dense(hbar)?.value)
    };

    // Bracket the minimum of the convex g, starting around [-1, 2].
    let (mut lo, mut hi) = (-1.0, 2.0);
    let mut step = 1.0;
    while g(lo)? < g(lo + 0.5 * step)? {
        lo -= step;
        step *= 2.0;
    }
    step = 1.0;
    while g(hi)? < g(hi - 0.5 * step)? {
        hi += step;
        step *= 2.0;
    }

    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (g(x1)?, g(x2)?);
    while hi - lo > GOLDEN_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2)?;
        }
    }
    let (t, gmin) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    let coefficients = (t / gmin, (t - 1.0) / gmin);
    let ball_norm = g(t)? / gmin;
    Ok(AnsatzOptimum { pair, hbar, coefficients, ball_norm, value: 1.0 / gmin, evaluations })
}

pub fn ansatz_distance(pair: StatePair, hbar: f64) -> Result<DistanceResult> {
    let opt = ansatz_optimum(pair, hbar)?;
    Ok(DistanceResult {
        value: opt.value,
        method: Method::Ansatz,
        coefficients: Some(opt.coefficients),
        saturated: (opt.ball_norm - 1.0).abs() <= SATURATION,
        truncation_safe: true,
    })
}

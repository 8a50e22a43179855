use std::fmt;

use serde::{Deserialize, Serialize};

use super::element::DiagonalElement;
use super::{DistanceResult, Method, StatePair};
use crate::error::{check_hbar, Error, Result};
use crate::fock::{build_basis, FockIndex};
use crate::tolerances::{SATURATION, SUPPORT_MARGIN};

/// Which piece of the four-branch formula a pair falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Zero,
    /// States differ by one quantum in mode 1.
    #[serde(rename = "adjacent_1")]
    Adjacent1,
    /// States differ by one quantum in mode 2.
    #[serde(rename = "adjacent_2")]
    Adjacent2,
    /// `|Δn1| + |Δn2| >= 2`.
    Far,
}

impl Branch {
    pub const fn label(self) -> &'static str {
        match self {
            Branch::Zero => "zero",
            Branch::Adjacent1 => "adjacent_1",
            Branch::Adjacent2 => "adjacent_2",
            Branch::Far => "far",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Symmetric in the pair: `classify(p) == classify(p.swapped())`.
pub fn classify(pair: StatePair) -> Branch {
    let d1 = pair.first.n1.abs_diff(pair.second.n1);
    let d2 = pair.first.n2.abs_diff(pair.second.n2);
    match (d1, d2) {
        (0, 0) => Branch::Zero,
        (1, 0) => Branch::Adjacent1,
        (0, 1) => Branch::Adjacent2,
        _ => Branch::Far,
    }
}

/// `d(|m+1,n>, |m,n>) = sqrt(ħ/2) / sqrt(m + 1 + (n+1)n / (√n + √(n+1))²)`.
pub fn adjacent_distance(m: usize, n: usize, hbar: f64) -> Result<f64> {
    check_hbar(hbar)?;
    Ok(adjacent_delta(m, n, hbar))
}

fn adjacent_delta(m: usize, n: usize, hbar: f64) -> f64 {
    let (m, n) = (m as f64, n as f64);
    let s = n.sqrt() + (n + 1.0).sqrt();
    (hbar / 2.0).sqrt() / (m + 1.0 + (n + 1.0) * n / (s * s)).sqrt()
}

/// `sqrt(ħ/2) (1/√(k+l+1) + 1/√(m+n+1))` for `|k-m| + |l-n| >= 2`.
pub fn far_distance(pair: StatePair, hbar: f64) -> Result<f64> {
    check_hbar(hbar)?;
    if classify(pair) != Branch::Far {
        return Err(Error::NotFarPair { first: pair.first, second: pair.second });
    }
    let (c, d) = far_coefficients(pair, hbar);
    Ok(c - d)
}

fn far_coefficients(pair: StatePair, hbar: f64) -> (f64, f64) {
    let c = (hbar / (2.0 * (pair.first.level() + 1) as f64)).sqrt();
    let d = -(hbar / (2.0 * (pair.second.level() + 1) as f64)).sqrt();
    (c, d)
}

/// Two-point coefficients for `|raised> = |lower> + one quantum` in `mode_one`:
/// `(c, d)` on `(raised, lower)`.
fn adjacent_coefficients(lower: FockIndex, mode_one: bool, hbar: f64) -> (f64, f64) {
    let (u, v) = if mode_one { (lower.n1, lower.n2) } else { (lower.n2, lower.n1) };
    let delta = adjacent_delta(u, v, hbar);
    let (sv, sv1) = ((v as f64).sqrt(), ((v + 1) as f64).sqrt());
    (sv / (sv + sv1) * delta, -sv1 / (sv + sv1) * delta)
}

/// The closed-form element's coefficients `(c, d)` on `(first, second)`;
/// `None` for identical states.
pub(crate) fn closed_form_coefficients(pair: StatePair, hbar: f64) -> Result<Option<(f64, f64)>> {
    check_hbar(hbar)?;
    let branch = classify(pair);
    let coefficients = match branch {
        Branch::Zero => return Ok(None),
        Branch::Far => far_coefficients(pair, hbar),
        Branch::Adjacent1 | Branch::Adjacent2 => {
            let mode_one = branch == Branch::Adjacent1;
            let first_raised = if mode_one { pair.first.n1 > pair.second.n1 } else { pair.first.n2 > pair.second.n2 };
            if first_raised {
                adjacent_coefficients(pair.second, mode_one, hbar)
            } else {
                let (c, d) = adjacent_coefficients(pair.first, mode_one, hbar);
                (d, c)
            }
        }
    };
    Ok(Some(coefficients))
}

/// The four-branch formula, in units of `sqrt(ħ)` scaling.
pub fn closed_form_value(pair: StatePair, hbar: f64) -> Result<f64> {
    check_hbar(hbar)?;
    Ok(match classify(pair) {
        Branch::Zero => 0.0,
        Branch::Far => far_distance(pair, hbar)?,
        Branch::Adjacent1 => adjacent_delta(pair.first.n1.min(pair.second.n1), pair.first.n2, hbar),
        Branch::Adjacent2 => adjacent_delta(pair.first.n2.min(pair.second.n2), pair.first.n1, hbar),
    })
}

/// Closed-form distance together with its two-point element.
///
/// `saturated` is evaluated honestly: the element's full operator-norm ball
/// condition is computed, and for most pairs it exceeds 1 (the formula only
/// bounds the diagonal of `D1†D1`).
pub fn closed_form_distance(pair: StatePair, hbar: f64) -> Result<DistanceResult> {
    let value = closed_form_value(pair, hbar)?;
    let coefficients = closed_form_coefficients(pair, hbar)?;
    let saturated = match coefficients {
        None => false,
        Some((c, d)) => {
            let basis = build_basis(pair.max_occupation() + SUPPORT_MARGIN)?;
            let e = DiagonalElement::from_states(basis, &[(pair.first, c), (pair.second, d)])?;
            (e.ball_norm(hbar)? - 1.0).abs() <= SATURATION
        }
    };
    Ok(DistanceResult { value, method: Method::ClosedForm, coefficients, saturated, truncation_safe: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pair(k: usize, l: usize, m: usize, n: usize) -> StatePair {
        StatePair::new(FockIndex::new(k, l), FockIndex::new(m, n))
    }

    #[test]
    fn formula_examples() {
        let h = 1.0;
        assert_eq!(closed_form_value(pair(0, 0, 0, 0), h).unwrap(), 0.0);
        assert!((closed_form_value(pair(1, 0, 0, 0), h).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((closed_form_value(pair(1, 1, 0, 1), h).unwrap() - 0.61013).abs() < 1e-5);
        assert!((closed_form_value(pair(2, 1, 0, 0), h).unwrap() - 1.06066).abs() < 1e-5);
        assert!((closed_form_value(pair(2, 0, 0, 0), h).unwrap() - 1.11536).abs() < 1e-5);
    }

    #[test]
    fn branches() {
        assert_eq!(classify(pair(3, 2, 3, 2)), Branch::Zero);
        assert_eq!(classify(pair(0, 2, 1, 2)), Branch::Adjacent1);
        assert_eq!(classify(pair(4, 1, 4, 2)), Branch::Adjacent2);
        assert_eq!(classify(pair(1, 1, 0, 0)), Branch::Far);
        assert_eq!(Branch::Adjacent2.to_string(), "adjacent_2");
        assert!(matches!(far_distance(pair(1, 0, 0, 0), 1.0), Err(Error::NotFarPair { .. })));
    }

    #[test]
    fn mirrored_adjacent_branch() {
        // (m, n+1) vs (m, n) with m = 1, n = 0 mirrors (1, 1) vs (0, 1).
        let a = closed_form_value(pair(1, 1, 1, 0), 1.0).unwrap();
        let b = closed_form_value(pair(1, 1, 0, 1), 1.0).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn closed_form_element_is_not_in_the_ball() {
        let r = closed_form_distance(pair(1, 0, 0, 0), 1.0).unwrap();
        assert_eq!(r.coefficients, Some((0.0, -0.5f64.sqrt())));
        assert!(!r.saturated);
    }

    #[test]
    fn rejects_bad_hbar() {
        assert!(matches!(closed_form_distance(pair(1, 0, 0, 0), -1.0), Err(Error::InvalidHbar(_))));
    }

    fn any_pair() -> impl Strategy<Value = StatePair> {
        (0usize..7, 0usize..7, 0usize..7, 0usize..7).prop_map(|(k, l, m, n)| pair(k, l, m, n))
    }

    proptest! {
        #[test]
        fn symmetric(p in any_pair(), hbar in 0.1f64..5.0) {
            prop_assert_eq!(classify(p), classify(p.swapped()));
            prop_assert_eq!(closed_form_value(p, hbar).unwrap(), closed_form_value(p.swapped(), hbar).unwrap());
        }

        #[test]
        fn coefficients_reproduce_value(p in any_pair(), hbar in 0.1f64..5.0) {
            let value = closed_form_value(p, hbar).unwrap();
            match closed_form_coefficients(p, hbar).unwrap() {
                None => prop_assert!(p.is_diagonal() && value == 0.0),
                Some((c, d)) => prop_assert!(((c - d).abs() - value).abs() <= 1e-12),
            }
        }

        #[test]
        fn scales_as_sqrt_hbar(p in any_pair(), hbar in 0.1f64..5.0) {
            let base = closed_form_value(p, hbar).unwrap();
            let quadrupled = closed_form_value(p, 4.0 * hbar).unwrap();
            prop_assert!((quadrupled - 2.0 * base).abs() <= 1e-14 * base.max(1.0));
        }

        #[test]
        fn positive_off_the_diagonal(p in any_pair()) {
            prop_assert_eq!(closed_form_value(p, 1.0).unwrap() == 0.0, p.is_diagonal());
        }
    }
}

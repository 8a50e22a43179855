use super::closed_form::{classify, closed_form_coefficients, Branch};
use super::element::DiagonalElement;
use super::StatePair;
use crate::error::{Error, Result};
use crate::fock::{FockIndex, TruncatedBasis};
use crate::tolerances::SUPPORT_MARGIN;

fn require_margin(basis: TruncatedBasis, pair: StatePair) -> Result<()> {
    let required = pair.max_occupation() + SUPPORT_MARGIN;
    if basis.cutoff() < required {
        return Err(Error::TruncationUnsafe { cutoff: basis.cutoff(), required });
    }
    Ok(())
}

/// Two-point closed-form element for any distinct pair, `c ρ_first + d ρ_second`.
pub fn optimal_element(pair: StatePair, hbar: f64, basis: TruncatedBasis) -> Result<DiagonalElement> {
    let (c, d) = closed_form_coefficients(pair, hbar)?.ok_or(Error::IdenticalStates(pair.first))?;
    require_margin(basis, pair)?;
    DiagonalElement::from_states(basis, &[(pair.first, c), (pair.second, d)])
}

/// Element `c1 ρ_{m+1,n} + d1 ρ_{m,n}` with
/// `c1 = √n δ / (√n + √(n+1))`, `d1 = -√(n+1) δ / (√n + √(n+1))`.
pub fn optimal_element_adjacent(m: usize, n: usize, hbar: f64, basis: TruncatedBasis) -> Result<DiagonalElement> {
    optimal_element(StatePair::new(FockIndex::new(m + 1, n), FockIndex::new(m, n)), hbar, basis)
}

/// Element `c2 ρ_{k,l} + d2 ρ_{m,n}` with `c2 = sqrt(ħ / 2(k+l+1))`, `d2 = -sqrt(ħ / 2(m+n+1))`.
pub fn optimal_element_far(pair: StatePair, hbar: f64, basis: TruncatedBasis) -> Result<DiagonalElement> {
    if classify(pair) != Branch::Far {
        return Err(Error::NotFarPair { first: pair.first, second: pair.second });
    }
    optimal_element(pair, hbar, basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::closed_form_value;
    use crate::fock::build_basis;

    fn pair(k: usize, l: usize, m: usize, n: usize) -> StatePair {
        StatePair::new(FockIndex::new(k, l), FockIndex::new(m, n))
    }

    #[test]
    fn adjacent_coefficients() {
        let basis = build_basis(4).unwrap();
        let e = optimal_element_adjacent(0, 0, 1.0, basis).unwrap();
        assert_eq!(e.coefficient(FockIndex::new(1, 0)), 0.0);
        assert!((e.coefficient(FockIndex::VACUUM) + 0.5f64.sqrt()).abs() < 1e-15);

        let e = optimal_element_adjacent(0, 1, 1.0, basis).unwrap();
        let gap = e.functional(FockIndex::new(1, 1), FockIndex::new(0, 1));
        assert!((gap - 0.61013).abs() < 1e-5);
    }

    #[test]
    fn far_coefficients() {
        let basis = build_basis(5).unwrap();
        let e = optimal_element_far(pair(2, 1, 0, 0), 1.0, basis).unwrap();
        assert!((e.coefficient(FockIndex::new(2, 1)) - 8f64.sqrt().recip()).abs() < 1e-15);
        assert!((e.coefficient(FockIndex::VACUUM) + 0.5f64.sqrt()).abs() < 1e-15);

        let e = optimal_element_far(pair(1, 1, 0, 0), 1.0, basis).unwrap();
        assert!((e.coefficient(FockIndex::new(1, 1)) - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gaps_match_closed_form() {
        let basis = build_basis(6).unwrap();
        for k in 0..=4 {
            for l in 0..=4 {
                for m in 0..=4 {
                    for n in 0..=4 {
                        let p = pair(k, l, m, n);
                        if p.is_diagonal() {
                            continue;
                        }
                        let e = optimal_element(p, 1.3, basis).unwrap();
                        let gap = e.functional(p.first, p.second);
                        assert!((gap.abs() - closed_form_value(p, 1.3).unwrap()).abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        let basis = build_basis(3).unwrap();
        assert!(matches!(optimal_element_far(pair(1, 0, 0, 0), 1.0, basis), Err(Error::NotFarPair { .. })));
        assert!(matches!(
            optimal_element_adjacent(1, 0, 1.0, basis),
            Err(Error::TruncationUnsafe { cutoff: 3, required: 4 })
        ));
        assert!(matches!(optimal_element(pair(1, 1, 1, 1), 1.0, basis), Err(Error::IdenticalStates(_))));
    }
}

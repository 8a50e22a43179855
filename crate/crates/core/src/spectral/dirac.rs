use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{check_hbar, Error, Result};
use crate::fock::{ladder_matrix, Ladder, MatrixOperator, Mode, TruncatedBasis};

/// Dirac operator on `F ⊗ C⁴`, stored as a `4·dim × 4·dim` matrix whose
/// `(r, c)` block acts from spinor slot `c` into slot `r`:
///
/// ```text
///                   ⎛  0     0   -a2†  -a1† ⎞
/// D = sqrt(2/hbar)  ⎜  0     0    a1   -a2  ⎟
///                   ⎜ -a2   a1†   0     0   ⎟
///                   ⎝ -a1  -a2†   0     0   ⎠
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct DiracOperator {
    basis: TruncatedBasis,
    hbar: f64,
    matrix: DMatrix<Complex64>,
}

pub fn dirac_operator(basis: TruncatedBasis, hbar: f64) -> Result<DiracOperator> {
    check_hbar(hbar)?;
    let a1 = ladder_matrix(basis, Mode::One, Ladder::Annihilation);
    let a2 = ladder_matrix(basis, Mode::Two, Ladder::Annihilation);
    let a1d = a1.adjoint();
    let a2d = a2.adjoint();
    let blocks: [(usize, usize, MatrixOperator); 8] = [
        (0, 2, -&a2d),
        (0, 3, -&a1d),
        (1, 2, a1.clone()),
        (1, 3, -&a2),
        (2, 0, -&a2),
        (2, 1, a1d.clone()),
        (3, 0, -&a1),
        (3, 1, -&a2d),
    ];
    let dim = basis.dim();
    let scale = Complex64::new((2.0 / hbar).sqrt(), 0.0);
    let mut matrix = DMatrix::zeros(4 * dim, 4 * dim);
    for (r, c, block) in blocks {
        matrix.view_mut((r * dim, c * dim), (dim, dim)).copy_from(&(block.entries() * scale));
    }
    Ok(DiracOperator { basis, hbar, matrix })
}

impl DiracOperator {
    pub fn basis(&self) -> TruncatedBasis {
        self.basis
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Block acting from slot `col` into slot `row` (both `0..4`).
    pub fn block(&self, row: usize, col: usize) -> DMatrix<Complex64> {
        assert!(row < 4 && col < 4, "spinor slot out of range");
        let dim = self.basis.dim();
        self.matrix.view((row * dim, col * dim), (dim, dim)).into_owned()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Applies `D` to a spinor given as four Fock-space components.
    pub fn apply(&self, slots: &[DVector<Complex64>; 4]) -> [DVector<Complex64>; 4] {
        let dim = self.basis.dim();
        let mut stacked = DVector::zeros(4 * dim);
        for (s, v) in slots.iter().enumerate() {
            stacked.rows_mut(s * dim, dim).copy_from(v);
        }
        let out = &self.matrix * stacked;
        std::array::from_fn(|s| out.rows(s * dim, dim).into_owned())
    }

    /// Full commutator `[D, π(e)]` with `π(e) = diag(e, e, e, e)`.
    pub fn commutator_with(&self, e: &MatrixOperator) -> Result<DMatrix<Complex64>> {
        if e.basis() != self.basis {
            return Err(Error::BasisMismatch { left: self.basis.cutoff(), right: e.basis().cutoff() });
        }
        let dim = self.basis.dim();
        let mut rep = DMatrix::zeros(4 * dim, 4 * dim);
        for s in 0..4 {
            rep.view_mut((s * dim, s * dim), (dim, dim)).copy_from(e.entries());
        }
        Ok(&self.matrix * &rep - &rep * &self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_basis, FockIndex};

    #[test]
    fn hermitian_at_every_cutoff() {
        for n in 1..=6 {
            for hbar in [0.3, 1.0, 2.5] {
                let d = dirac_operator(build_basis(n).unwrap(), hbar).unwrap();
                assert_eq!(d.hermitian_deviation(), 0.0);
            }
        }
    }

    #[test]
    fn top_right_block_is_minus_scaled_creation() {
        let basis = build_basis(3).unwrap();
        let hbar = 0.5;
        let d = dirac_operator(basis, hbar).unwrap();
        let expected = ladder_matrix(basis, Mode::One, Ladder::Creation).scale_real(-(2.0 / hbar).sqrt());
        assert_eq!(d.block(0, 3), *expected.entries());
    }

    #[test]
    fn action_on_vacuum_in_third_slot() {
        // Column 3 carries -a2† into slot 1 and a1 into slot 2; a1 kills the vacuum.
        let basis = build_basis(3).unwrap();
        let d = dirac_operator(basis, 1.0).unwrap();
        let dim = basis.dim();
        let zero = DVector::zeros(dim);
        let mut vac = DVector::zeros(dim);
        vac[basis.ordinal(FockIndex::VACUUM).unwrap()] = Complex64::ONE;
        let out = d.apply(&[zero.clone(), zero.clone(), vac, zero.clone()]);

        let mut expected0 = DVector::zeros(dim);
        expected0[basis.ordinal(FockIndex::new(0, 1)).unwrap()] = Complex64::new(-2f64.sqrt(), 0.0);
        assert!((&out[0] - expected0).norm() < 1e-15);
        assert_eq!(out[1], zero);
        assert_eq!(out[2], zero);
        assert_eq!(out[3], zero);
    }

    #[test]
    fn rejects_bad_hbar() {
        let basis = build_basis(2).unwrap();
        assert_eq!(dirac_operator(basis, 0.0), Err(Error::InvalidHbar(0.0)));
    }
}

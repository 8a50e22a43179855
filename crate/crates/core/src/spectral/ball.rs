use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_hbar, Error, Result};
use crate::fock::{commutator, ladder_matrix, Ladder, MatrixOperator, Mode, TruncatedBasis};
use crate::tolerances::{HERMITIAN_INPUT, SUPPORT_MARGIN};

/// Largest singular value, as `sqrt(λ_max(A†A))` from a Hermitian eigen-solve.
///
/// Uses whichever of `A†A` and `AA†` is smaller. nalgebra's Hermitian
/// eigen-solver can return NaN or `inf` on the highly degenerate Gram matrices
/// produced by diagonal elements; those cases go through the SVD instead.
pub fn operator_norm(a: &DMatrix<Complex64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    let gram = if a.nrows() >= a.ncols() { a.adjoint() * a } else { a * a.adjoint() };
    let eig = gram.symmetric_eigenvalues();
    if eig.iter().all(|v| v.is_finite()) {
        eig.max().max(0.0).sqrt()
    } else {
        a.singular_values().max()
    }
}

/// Largest eigenvalue of a Hermitian matrix.
///
/// Falls back to `σ_max(h + sI) - s` with `s = ‖h‖_F` (which makes the shifted
/// matrix positive semidefinite) when the eigen-solve does not return finite values.
pub fn largest_eigenvalue(h: DMatrix<Complex64>) -> f64 {
    if h.is_empty() {
        return 0.0;
    }
    let eig = h.clone().symmetric_eigenvalues();
    if eig.iter().all(|v| v.is_finite()) {
        return eig.max();
    }
    let s = h.norm();
    let n = h.nrows();
    (h + DMatrix::<Complex64>::identity(n, n) * Complex64::new(s, 0.0)).singular_values().max() - s
}

/// The `2×2` block operator
///
/// ```text
/// D1(e) = ⎛ [a2,e]†   [a1,e]† ⎞
///         ⎝ [a1,e]   -[a2,e]  ⎠
/// ```
///
/// so that `[D, π(e)] = sqrt(2/hbar) [[0, D1], [-D1†, 0]]` for Hermitian `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracBlock {
    basis: TruncatedBasis,
    comm1: MatrixOperator,
    comm2: MatrixOperator,
}

/// Forms `D1(e)`; `e` must be Hermitian to within `1e-12`.
pub fn d1_block(basis: TruncatedBasis, e: &MatrixOperator) -> Result<DiracBlock> {
    if e.basis() != basis {
        return Err(Error::BasisMismatch { left: basis.cutoff(), right: e.basis().cutoff() });
    }
    let dev = e.hermitian_deviation();
    if dev > HERMITIAN_INPUT {
        return Err(Error::NotHermitian(dev));
    }
    let a1 = ladder_matrix(basis, Mode::One, Ladder::Annihilation);
    let a2 = ladder_matrix(basis, Mode::Two, Ladder::Annihilation);
    Ok(DiracBlock { basis, comm1: commutator(&a1, e)?, comm2: commutator(&a2, e)? })
}

impl DiracBlock {
    pub fn basis(&self) -> TruncatedBasis {
        self.basis
    }

    /// `[a1, e]`.
    pub fn comm1(&self) -> &MatrixOperator {
        &self.comm1
    }

    /// `[a2, e]`.
    pub fn comm2(&self) -> &MatrixOperator {
        &self.comm2
    }

    /// The four blocks in row-major order.
    pub fn blocks(&self) -> [[MatrixOperator; 2]; 2] {
        [[self.comm2.adjoint(), self.comm1.adjoint()], [self.comm1.clone(), -&self.comm2]]
    }

    pub fn assemble(&self) -> DMatrix<Complex64> {
        let dim = self.basis.dim();
        let mut m = DMatrix::zeros(2 * dim, 2 * dim);
        for (r, row) in self.blocks().iter().enumerate() {
            for (c, block) in row.iter().enumerate() {
                m.view_mut((r * dim, c * dim), (dim, dim)).copy_from(block.entries());
            }
        }
        m
    }

    pub fn assemble_adjoint(&self) -> DMatrix<Complex64> {
        self.assemble().adjoint()
    }

    /// `‖D1‖_op`.
    pub fn norm(&self) -> f64 {
        operator_norm(&self.assemble())
    }

    /// `[a1,e]†[a1,e] + [a2,e][a2,e]†`, the upper-left block of `D1†D1`.
    pub fn upper_gram_block(&self) -> MatrixOperator {
        &(&self.comm1.adjoint() * &self.comm1) + &(&self.comm2 * &self.comm2.adjoint())
    }

    /// `[a1,e][a1,e]† + [a2,e]†[a2,e]`, the lower-right block of `D1†D1`.
    pub fn lower_gram_block(&self) -> MatrixOperator {
        &(&self.comm1 * &self.comm1.adjoint()) + &(&self.comm2.adjoint() * &self.comm2)
    }
}

/// Value of `‖[D, π(e)]‖_op` together with its truncation status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallNorm {
    pub value: f64,
    /// False when `e` reaches within two steps of the cutoff in either mode; the
    /// value may then carry truncation error.
    pub truncation_safe: bool,
}

impl BallNorm {
    pub fn in_ball(&self) -> bool {
        self.value <= 1.0
    }
}

/// `‖[D, π(e)]‖_op = sqrt(2/hbar) ‖D1(e)‖_op`; membership in the ball is `value <= 1`.
pub fn ball_norm(basis: TruncatedBasis, e: &MatrixOperator, hbar: f64) -> Result<BallNorm> {
    check_hbar(hbar)?;
    let block = d1_block(basis, e)?;
    let truncation_safe = e.support().into_iter().all(|s| basis.within_margin(s, SUPPORT_MARGIN));
    Ok(BallNorm { value: (2.0 / hbar).sqrt() * block.norm(), truncation_safe })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_basis, FockIndex};
    use crate::spectral::dirac_operator;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(basis: TruncatedBasis, support_cut: usize, rng: &mut ChaCha8Rng) -> MatrixOperator {
        let mut op = MatrixOperator::zeros(basis);
        let states: Vec<_> = basis.states().filter(|s| s.n1 <= support_cut && s.n2 <= support_cut).collect();
        for (i, &r) in states.iter().enumerate() {
            for &c in &states[i..] {
                let z = if r == c {
                    Complex64::new(rng.random_range(-1.0..1.0), 0.0)
                } else {
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                };
                op.set_element(r, c, z).unwrap();
                op.set_element(c, r, z.conj()).unwrap();
            }
        }
        op
    }

    #[test]
    fn norm_of_identity_and_diagonal() {
        for n in [1, 3, 7] {
            assert!((operator_norm(&DMatrix::<Complex64>::identity(n, n)) - 1.0).abs() < 1e-14);
        }
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::ZERO,
        ]));
        assert!((operator_norm(&d) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn norm_of_truncated_annihilator() {
        let a1 = ladder_matrix(build_basis(8).unwrap(), Mode::One, Ladder::Annihilation);
        assert!((operator_norm(a1.entries()) - 8f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn norm_of_rectangular_matches_transpose() {
        let m = DMatrix::from_fn(3, 5, |i, j| Complex64::new((i + 2 * j) as f64, i as f64 - j as f64));
        assert!((operator_norm(&m) - operator_norm(&m.adjoint())).abs() < 1e-12);
    }

    #[test]
    fn zero_element_has_zero_blocks() {
        let basis = build_basis(3).unwrap();
        let block = d1_block(basis, &MatrixOperator::zeros(basis)).unwrap();
        assert!(block.blocks().iter().flatten().all(|b| b.max_abs() == 0.0));
        let bn = ball_norm(basis, &MatrixOperator::zeros(basis), 1.0).unwrap();
        assert_eq!(bn.value, 0.0);
        assert!(bn.truncation_safe);
    }

    #[test]
    fn vacuum_projector_commutators() {
        // a1 |0,0><0,0| = 0 and |0,0><0,0| a1 = |0,0><1,0|.
        let basis = build_basis(4).unwrap();
        let alpha = 0.37;
        let e = MatrixOperator::projector(basis, FockIndex::VACUUM).unwrap().scale_real(alpha);
        let block = d1_block(basis, &e).unwrap();
        let mut c1 = MatrixOperator::zeros(basis);
        c1.set_element(FockIndex::VACUUM, FockIndex::new(1, 0), Complex64::new(-alpha, 0.0)).unwrap();
        let mut c2 = MatrixOperator::zeros(basis);
        c2.set_element(FockIndex::VACUUM, FockIndex::new(0, 1), Complex64::new(-alpha, 0.0)).unwrap();
        assert_eq!(*block.comm1(), c1);
        assert_eq!(*block.comm2(), c2);
        let [[b00, b01], [b10, b11]] = block.blocks();
        assert_eq!(b00, c2.adjoint());
        assert_eq!(b01, c1.adjoint());
        assert_eq!(b10, c1);
        assert_eq!(b11, -&c2);
    }

    #[test]
    fn vacuum_projector_ball_norm_is_sqrt_two_times_coefficient() {
        // The 2x2 sector {upper |1,0>, lower |0,1>} of D1†D1 is alpha^2 [[1, -1], [-1, 1]],
        // so ‖D1‖ = sqrt(2) alpha and ‖[D, π(e)]‖ = 2 alpha / sqrt(hbar).
        let basis = build_basis(4).unwrap();
        for hbar in [0.5, 1.0, 2.0] {
            let alpha = (hbar / 2.0f64).sqrt();
            let e = MatrixOperator::projector(basis, FockIndex::VACUUM).unwrap().scale_real(alpha);
            let bn = ball_norm(basis, &e, hbar).unwrap();
            assert!((bn.value - 2f64.sqrt()).abs() < 1e-12, "{}", bn.value);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let basis = build_basis(3).unwrap();
        let mut e = MatrixOperator::zeros(basis);
        e.set_element(FockIndex::VACUUM, FockIndex::new(0, 1), Complex64::ONE).unwrap();
        assert!(matches!(d1_block(basis, &e), Err(Error::NotHermitian(_))));
        assert!(matches!(ball_norm(basis, &e, 1.0), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn flags_margin_violations() {
        let basis = build_basis(4).unwrap();
        let ok = MatrixOperator::projector(basis, FockIndex::new(2, 2)).unwrap();
        let bad = MatrixOperator::projector(basis, FockIndex::new(3, 0)).unwrap();
        assert!(ball_norm(basis, &ok, 1.0).unwrap().truncation_safe);
        assert!(!ball_norm(basis, &bad, 1.0).unwrap().truncation_safe);
    }

    #[test]
    fn d1_route_matches_full_commutator() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for cutoff in [3, 4, 5] {
            let basis = build_basis(cutoff).unwrap();
            let dirac = dirac_operator(basis, 1.3).unwrap();
            for _ in 0..3 {
                let e = random_hermitian(basis, cutoff - 2, &mut rng);
                let full = operator_norm(&dirac.commutator_with(&e).unwrap());
                let via_d1 = ball_norm(basis, &e, 1.3).unwrap().value;
                assert!((full - via_d1).abs() <= 1e-9 * full.max(1.0), "{full} vs {via_d1}");
            }
        }
    }

    #[test]
    fn d1_and_adjoint_have_equal_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let basis = build_basis(4).unwrap();
        for _ in 0..5 {
            let block = d1_block(basis, &random_hermitian(basis, 2, &mut rng)).unwrap();
            let n = block.norm();
            let n_adj = operator_norm(&block.assemble_adjoint());
            assert!((n - n_adj).abs() <= 1e-9 * n.max(1.0));
        }
    }

    #[test]
    fn gram_diagonal_blocks_bound_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let basis = build_basis(4).unwrap();
        for _ in 0..5 {
            let block = d1_block(basis, &random_hermitian(basis, 2, &mut rng)).unwrap();
            let norm_sq = block.norm().powi(2);
            for part in [block.upper_gram_block(), block.lower_gram_block()] {
                let top = largest_eigenvalue(part.into_entries());
                assert!(top <= norm_sq + 1e-9, "{top} > {norm_sq}");
            }
        }
    }

    #[test]
    fn linear_in_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let basis = build_basis(4).unwrap();
        let e = random_hermitian(basis, 2, &mut rng);
        let f = random_hermitian(basis, 2, &mut rng);
        let (alpha, beta) = (0.7, -1.9);
        let combo = &e.scale_real(alpha) + &f.scale_real(beta);
        let lhs = d1_block(basis, &combo).unwrap().assemble();
        let rhs = d1_block(basis, &e).unwrap().assemble() * Complex64::new(alpha, 0.0)
            + d1_block(basis, &f).unwrap().assemble() * Complex64::new(beta, 0.0);
        assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-12));

        let doubled = d1_block(basis, &e.scale_real(2.0)).unwrap().assemble();
        let twice = d1_block(basis, &e).unwrap().assemble() * Complex64::new(2.0, 0.0);
        assert!((doubled - twice).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn homogeneous_and_blind_to_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let basis = build_basis(4).unwrap();
        let e = random_hermitian(basis, 2, &mut rng);
        let base = ball_norm(basis, &e, 1.0).unwrap().value;
        for alpha in [-2.5, 0.3, 4.0] {
            let scaled = ball_norm(basis, &e.scale_real(alpha), 1.0).unwrap().value;
            assert!((scaled - alpha.abs() * base).abs() < 1e-10 * base.max(1.0));
        }
        let id = MatrixOperator::identity(basis);
        let block = d1_block(basis, &id).unwrap();
        assert_eq!(block.norm(), 0.0);
    }

    #[test]
    fn margin_respecting_elements_are_cutoff_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let small = build_basis(4).unwrap();
        let large = build_basis(5).unwrap();
        for _ in 0..4 {
            let e = random_hermitian(small, 2, &mut rng);
            let mut e_big = MatrixOperator::zeros(large);
            for r in small.states() {
                for c in small.states() {
                    e_big.set_element(r, c, e.element(r, c).unwrap()).unwrap();
                }
            }
            let a = ball_norm(small, &e, 1.0).unwrap().value;
            let b = ball_norm(large, &e_big, 1.0).unwrap().value;
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}

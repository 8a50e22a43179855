//! Extended phase space `X̂ᵢ, Ŷᵢ, P̂ᵢ, Q̂ᵢ` acting on the quantum Hilbert space of
//! Hilbert-Schmidt operators.
//!
//! Every generator has the form `φ ↦ Lφ + φR`: `X̂ᵢ` and `P̂ᵢ` multiply from the
//! left by `x̂ᵢ`, `p̂ᵢ`, while
//!
//! ```text
//! Ŷᵢ φ = (μ/ħ) p̂ᵢ φ + (s/ħ) φ p̂ᵢ
//! Q̂ᵢ φ = -(ν/ħ) x̂ᵢ φ + (s/ħ) φ x̂ᵢ,      s = sqrt(ħ² - μν).
//! ```
//!
//! Commutators of such maps close on the same form,
//! `[L_a + R_b, L_c + R_d] = L_[a,c] + R_[d,b]`, which keeps the check over
//! every interior matrix unit linear in the basis dimension.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_hbar, Error, Result};
use crate::fock::{commutator, position_momentum_matrix, FockIndex, MatrixOperator, Quadrature, TruncatedBasis};
use crate::tolerances::PHASE_SPACE_COMMUTATOR;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceParams {
    hbar: f64,
    mu: f64,
    nu: f64,
}

impl PhaseSpaceParams {
    pub fn new(hbar: f64, mu: f64, nu: f64) -> Result<Self> {
        check_hbar(hbar)?;
        if !(mu.is_finite() && nu.is_finite()) || mu * nu > hbar * hbar {
            return Err(Error::InvalidPhaseSpace { hbar, mu, nu });
        }
        Ok(Self { hbar, mu, nu })
    }

    /// `μ = ν = ħ`, where `s = 0` and `Ŷ`, `Q̂` are pure left multiplications.
    pub fn degenerate(hbar: f64) -> Result<Self> {
        Self::new(hbar, hbar, hbar)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    fn mixing(&self) -> f64 {
        (self.hbar * self.hbar - self.mu * self.nu).max(0.0).sqrt()
    }
}

/// Linear map `φ ↦ left·φ + φ·right` on operators over a truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    left: MatrixOperator,
    right: MatrixOperator,
}

impl Superoperator {
    pub fn new(left: MatrixOperator, right: MatrixOperator) -> Result<Self> {
        if left.basis() != right.basis() {
            return Err(Error::BasisMismatch { left: left.basis().cutoff(), right: right.basis().cutoff() });
        }
        Ok(Self { left, right })
    }

    pub fn left_multiplication(a: MatrixOperator) -> Self {
        let right = MatrixOperator::zeros(a.basis());
        Self { left: a, right }
    }

    pub fn right_multiplication(a: MatrixOperator) -> Self {
        let left = MatrixOperator::zeros(a.basis());
        Self { left, right: a }
    }

    pub fn left(&self) -> &MatrixOperator {
        &self.left
    }

    pub fn right(&self) -> &MatrixOperator {
        &self.right
    }

    pub fn apply(&self, phi: &MatrixOperator) -> MatrixOperator {
        &(&self.left * phi) + &(phi * &self.right)
    }

    /// Matrix on column-major `vec(φ)`: `I ⊗ left + rightᵀ ⊗ I`.
    pub fn vectorized(&self) -> DMatrix<Complex64> {
        let dim = self.left.basis().dim();
        let id = DMatrix::<Complex64>::identity(dim, dim);
        id.kronecker(self.left.entries()) + self.right.entries().transpose().kronecker(&id)
    }

    pub fn commutator(&self, other: &Superoperator) -> Result<Superoperator> {
        Superoperator::new(commutator(&self.left, &other.left)?, commutator(&other.right, &self.right)?)
    }

    /// `max |(S - c)(|row><col|)|` over matrix entries.
    pub fn unit_deviation(&self, scalar: Complex64, row: FockIndex, col: FockIndex) -> f64 {
        let basis = self.left.basis();
        let (i, j) = (basis.ordinal(row).expect("row in basis"), basis.ordinal(col).expect("col in basis"));
        let l = self.left.entries();
        let r = self.right.entries();
        let mut worst: f64 = 0.0;
        // S|i><j| = (L e_i) e_jᵀ + e_i (e_jᵀ R): column j from L, row i from R.
        for k in 0..basis.dim() {
            if k != i {
                worst = worst.max(l[(k, i)].norm());
            }
            if k != j {
                worst = worst.max(r[(j, k)].norm());
            }
        }
        worst.max((l[(i, i)] + r[(j, j)] - scalar).norm())
    }
}

/// Names of the eight phase-space generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(u8),
    Y(u8),
    P(u8),
    Q(u8),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(i) => write!(f, "X{i}"),
            Generator::Y(i) => write!(f, "Y{i}"),
            Generator::P(i) => write!(f, "P{i}"),
            Generator::Q(i) => write!(f, "Q{i}"),
        }
    }
}

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::X(1),
        Generator::X(2),
        Generator::Y(1),
        Generator::Y(2),
        Generator::P(1),
        Generator::P(2),
        Generator::Q(1),
        Generator::Q(2),
    ];

    fn index(self) -> u8 {
        match self {
            Generator::X(i) | Generator::Y(i) | Generator::P(i) | Generator::Q(i) => i,
        }
    }

    /// Required value of `[self, other]` as a multiple of the identity.
    pub fn expected_commutator(self, other: Generator, params: &PhaseSpaceParams) -> Complex64 {
        use Generator::*;
        if self.index() != other.index() {
            return Complex64::ZERO;
        }
        let i = Complex64::I;
        match (self, other) {
            (X(_), P(_)) | (Y(_), Q(_)) => i * params.hbar,
            (P(_), X(_)) | (Q(_), Y(_)) => -i * params.hbar,
            (X(_), Y(_)) => i * params.mu,
            (Y(_), X(_)) => -i * params.mu,
            (P(_), Q(_)) => i * params.nu,
            (Q(_), P(_)) => -i * params.nu,
            _ => Complex64::ZERO,
        }
    }
}

/// Superoperator for one generator.
pub fn phase_space_generator(
    basis: TruncatedBasis,
    params: &PhaseSpaceParams,
    generator: Generator,
) -> Result<Superoperator> {
    let hbar = params.hbar;
    let quad = |q: Quadrature| position_momentum_matrix(basis, q, hbar);
    let (x, p) = match generator.index() {
        1 => (quad(Quadrature::X1)?, quad(Quadrature::P1)?),
        _ => (quad(Quadrature::X2)?, quad(Quadrature::P2)?),
    };
    let s = params.mixing() / hbar;
    Ok(match generator {
        Generator::X(_) => Superoperator::left_multiplication(x),
        Generator::P(_) => Superoperator::left_multiplication(p),
        Generator::Y(_) => Superoperator { left: p.scale_real(params.mu / hbar), right: p.scale_real(s) },
        Generator::Q(_) => Superoperator { left: x.scale_real(-params.nu / hbar), right: x.scale_real(s) },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorCheck {
    pub lhs: String,
    pub rhs: String,
    pub expected_re: f64,
    pub expected_im: f64,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceReport {
    pub params: PhaseSpaceParams,
    pub cutoff: usize,
    pub interior_units: usize,
    pub checks: Vec<CommutatorCheck>,
}

impl PhaseSpaceReport {
    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max)
    }

    pub fn passes(&self) -> bool {
        self.max_deviation() < PHASE_SPACE_COMMUTATOR
    }
}

/// Evaluates every commutator among the eight generators on each matrix unit
/// `|r><c|` with `r`, `c` at most `cutoff - 1` in both modes.
pub fn verify_phase_space_rep(basis: TruncatedBasis, params: &PhaseSpaceParams) -> Result<PhaseSpaceReport> {
    let ops = Generator::ALL
        .iter()
        .map(|&g| phase_space_generator(basis, params, g).map(|s| (g, s)))
        .collect::<Result<Vec<_>>>()?;
    let interior: Vec<FockIndex> = basis.states().filter(|&s| basis.within_margin(s, 1)).collect();
    let mut checks = Vec::new();
    for (a, (ga, sa)) in ops.iter().enumerate() {
        for (gb, sb) in &ops[a + 1..] {
            let comm = sa.commutator(sb)?;
            let expected = ga.expected_commutator(*gb, params);
            let mut worst: f64 = 0.0;
            for &r in &interior {
                for &c in &interior {
                    worst = worst.max(comm.unit_deviation(expected, r, c));
                }
            }
            checks.push(CommutatorCheck {
                lhs: ga.to_string(),
                rhs: gb.to_string(),
                expected_re: expected.re,
                expected_im: expected.im,
                max_deviation: worst,
            });
        }
    }
    Ok(PhaseSpaceReport { params: *params, cutoff: basis.cutoff(), interior_units: interior.len().pow(2), checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_basis;

    fn check<'a>(report: &'a PhaseSpaceReport, lhs: &str, rhs: &str) -> &'a CommutatorCheck {
        report.checks.iter().find(|c| c.lhs == lhs && c.rhs == rhs).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(PhaseSpaceParams::new(1.0, 2.0, 1.0).is_err());
        assert!(PhaseSpaceParams::new(0.0, 0.0, 0.0).is_err());
        assert!(PhaseSpaceParams::new(1.0, -3.0, 2.0).is_ok());
        assert!(PhaseSpaceParams::degenerate(1.0).is_ok());
    }

    #[test]
    fn degenerate_representation() {
        let basis = build_basis(3).unwrap();
        let params = PhaseSpaceParams::degenerate(1.0).unwrap();
        let report = verify_phase_space_rep(basis, &params).unwrap();
        assert_eq!(report.checks.len(), 28);
        assert!(report.passes(), "max deviation {}", report.max_deviation());
        let xp = check(&report, "X1", "P1");
        assert_eq!((xp.expected_re, xp.expected_im), (0.0, 1.0));
        let xy = check(&report, "X1", "Y1");
        assert_eq!((xy.expected_re, xy.expected_im), (0.0, 1.0));
        assert!(check(&report, "X1", "Y2").max_deviation < 1e-12);
    }

    #[test]
    fn nondegenerate_representation() {
        let basis = build_basis(4).unwrap();
        for hbar in [0.5, 1.0, 2.0] {
            let params = PhaseSpaceParams::new(hbar, hbar / 2.0, hbar / 2.0).unwrap();
            let report = verify_phase_space_rep(basis, &params).unwrap();
            assert!(report.passes(), "hbar {hbar}: {}", report.max_deviation());
            let pq = check(&report, "P2", "Q2");
            assert_eq!(pq.expected_im, hbar / 2.0);
        }
    }

    #[test]
    fn boundary_units_would_fail() {
        // The truncated [x, p] is wrong on the n1 = N face; interior restriction matters.
        let basis = build_basis(2).unwrap();
        let params = PhaseSpaceParams::degenerate(1.0).unwrap();
        let x = phase_space_generator(basis, &params, Generator::X(1)).unwrap();
        let p = phase_space_generator(basis, &params, Generator::P(1)).unwrap();
        let comm = x.commutator(&p).unwrap();
        let edge = FockIndex::new(2, 0);
        assert!(comm.unit_deviation(Complex64::I, edge, edge) > 0.5);
    }

    #[test]
    fn closed_commutator_matches_vectorized() {
        let basis = build_basis(2).unwrap();
        let params = PhaseSpaceParams::new(1.0, 0.4, 0.7).unwrap();
        let ops: Vec<_> = Generator::ALL.iter().map(|&g| phase_space_generator(basis, &params, g).unwrap()).collect();
        for a in &ops {
            for b in &ops {
                let (va, vb) = (a.vectorized(), b.vectorized());
                let brute = &va * &vb - &vb * &va;
                let closed = a.commutator(b).unwrap().vectorized();
                assert!((brute - closed).iter().all(|z| z.norm() < 1e-12));
            }
        }
    }

    #[test]
    fn vectorized_matches_apply() {
        let basis = build_basis(2).unwrap();
        let params = PhaseSpaceParams::new(1.0, 0.4, 0.7).unwrap();
        let y = phase_space_generator(basis, &params, Generator::Y(2)).unwrap();
        let dim = basis.dim();
        let phi = MatrixOperator::from_matrix(
            basis,
            DMatrix::from_fn(dim, dim, |i, j| Complex64::new(i as f64 - 0.5 * j as f64, (i * j) as f64 * 0.1)),
        )
        .unwrap();
        let direct = y.apply(&phi);
        let vec_phi = nalgebra::DVector::from_column_slice(phi.entries().as_slice());
        let via_vec = y.vectorized() * vec_phi;
        let direct_vec = nalgebra::DVector::from_column_slice(direct.entries().as_slice());
        assert!((via_vec - direct_vec).norm() < 1e-12);
    }
}

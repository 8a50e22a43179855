//! Truncated two-mode boson Fock space.
//!
//! States `|n1, n2>` are kept inside a box `0 <= n1, n2 <= N` and enumerated
//! row-major, so `|n1, n2>` sits at ordinal `n1 * (N + 1) + n2`. Ladder
//! operators act by
//!
//! ```text
//! a1 |n1, n2> = sqrt(n1)     |n1 - 1, n2>      a1† |n1, n2> = sqrt(n1 + 1) |n1 + 1, n2>
//! a2 |n1, n2> = sqrt(n2)     |n1, n2 - 1>      a2† |n1, n2> = sqrt(n2 + 1) |n1, n2 + 1>
//! ```
//!
//! and any transition that leaves the box is dropped. The creation matrix is
//! therefore the exact conjugate transpose of the annihilation matrix, and
//! `[a1, a1†]` only differs from the identity on the `n1 = N` face.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_hbar, Error, Result};

/// Occupation numbers `(n1, n2)` of a two-mode Fock state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FockIndex {
    pub n1: usize,
    pub n2: usize,
}

impl FockIndex {
    pub const VACUUM: FockIndex = FockIndex { n1: 0, n2: 0 };

    pub const fn new(n1: usize, n2: usize) -> Self {
        Self { n1, n2 }
    }

    /// Total excitation number `n1 + n2`.
    pub const fn level(&self) -> usize {
        self.n1 + self.n2
    }

    pub const fn occupation(&self, mode: Mode) -> usize {
        match mode {
            Mode::One => self.n1,
            Mode::Two => self.n2,
        }
    }

    /// Largest occupation over both modes.
    pub fn max_occupation(&self) -> usize {
        self.n1.max(self.n2)
    }

    /// L1 distance `|n1 - m1| + |n2 - m2|` between occupation vectors.
    pub fn manhattan(&self, other: &FockIndex) -> usize {
        self.n1.abs_diff(other.n1) + self.n2.abs_diff(other.n2)
    }
}

impl fmt::Display for FockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.n1, self.n2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected a state written as `n1,n2` with non-negative integers, got {0:?}")]
pub struct ParseFockIndexError(String);

impl FromStr for FockIndex {
    type Err = ParseFockIndexError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let err = || ParseFockIndexError(s.to_owned());
        let (a, b) = s.split_once(',').ok_or_else(err)?;
        let n1 = a.trim().parse().map_err(|_| err())?;
        let n2 = b.trim().parse().map_err(|_| err())?;
        Ok(FockIndex { n1, n2 })
    }
}

/// One of the two oscillator modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::One, Mode::Two];
}

/// Annihilation (`a`) or creation (`a†`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Annihilation,
    Creation,
}

/// Phase-space coordinate operators `x1, x2, p1, p2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    X1,
    X2,
    P1,
    P2,
}

impl Quadrature {
    pub const ALL: [Quadrature; 4] = [Quadrature::X1, Quadrature::X2, Quadrature::P1, Quadrature::P2];

    pub const fn mode(self) -> Mode {
        match self {
            Quadrature::X1 | Quadrature::P1 => Mode::One,
            Quadrature::X2 | Quadrature::P2 => Mode::Two,
        }
    }
}

/// Box-truncated Fock basis `{ |n1, n2> : n1, n2 <= cutoff }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedBasis {
    cutoff: usize,
}

impl TruncatedBasis {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff == 0 {
            return Err(Error::CutoffTooSmall(cutoff));
        }
        Ok(Self { cutoff })
    }

    pub const fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Number of states per mode, `cutoff + 1`.
    pub const fn side(&self) -> usize {
        self.cutoff + 1
    }

    pub const fn dim(&self) -> usize {
        self.side() * self.side()
    }

    pub const fn contains(&self, state: FockIndex) -> bool {
        state.n1 <= self.cutoff && state.n2 <= self.cutoff
    }

    pub fn ordinal(&self, state: FockIndex) -> Option<usize> {
        self.contains(state).then(|| state.n1 * self.side() + state.n2)
    }

    pub fn state(&self, ordinal: usize) -> Option<FockIndex> {
        (ordinal < self.dim()).then(|| FockIndex::new(ordinal / self.side(), ordinal % self.side()))
    }

    /// All states in ordinal order.
    pub fn states(&self) -> impl Iterator<Item = FockIndex> + '_ {
        (0..self.dim()).map(|k| FockIndex::new(k / self.side(), k % self.side()))
    }

    /// True when `state` is at least `margin` steps inside the box in both modes.
    pub fn within_margin(&self, state: FockIndex, margin: usize) -> bool {
        state.n1 + margin <= self.cutoff && state.n2 + margin <= self.cutoff
    }

    pub(crate) fn require(&self, state: FockIndex) -> Result<usize> {
        self.ordinal(state).ok_or(Error::StateOutsideBasis { state, cutoff: self.cutoff })
    }
}

/// Builds the box-truncated basis with the given per-mode cutoff.
pub fn build_basis(cutoff: usize) -> Result<TruncatedBasis> {
    TruncatedBasis::new(cutoff)
}

/// Dense complex operator on a truncated Fock basis.
///
/// Arithmetic through `+`, `-`, `*` panics on mismatched bases, the same way
/// `nalgebra` panics on mismatched shapes; [`commutator`] is the checked
/// entry point.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOperator {
    basis: TruncatedBasis,
    entries: DMatrix<Complex64>,
}

impl MatrixOperator {
    pub fn from_matrix(basis: TruncatedBasis, entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = basis.dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::ShapeMismatch { rows: entries.nrows(), cols: entries.ncols(), dim });
        }
        Ok(Self { basis, entries })
    }

    pub fn zeros(basis: TruncatedBasis) -> Self {
        let dim = basis.dim();
        Self { basis, entries: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(basis: TruncatedBasis) -> Self {
        let dim = basis.dim();
        Self { basis, entries: DMatrix::identity(dim, dim) }
    }

    /// Diagonal operator with real entries given in ordinal order.
    pub fn from_real_diagonal(basis: TruncatedBasis, diagonal: &[f64]) -> Result<Self> {
        if diagonal.len() != basis.dim() {
            return Err(Error::CoefficientLength { got: diagonal.len(), expected: basis.dim() });
        }
        let mut op = Self::zeros(basis);
        for (k, &v) in diagonal.iter().enumerate() {
            op.entries[(k, k)] = Complex64::new(v, 0.0);
        }
        Ok(op)
    }

    /// Rank-one projector `|state><state|`.
    pub fn projector(basis: TruncatedBasis, state: FockIndex) -> Result<Self> {
        let k = basis.require(state)?;
        let mut op = Self::zeros(basis);
        op.entries[(k, k)] = Complex64::new(1.0, 0.0);
        Ok(op)
    }

    pub fn basis(&self) -> TruncatedBasis {
        self.basis
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    /// Matrix element `<row| A |col>`, or `None` if either state is outside the basis.
    pub fn element(&self, row: FockIndex, col: FockIndex) -> Option<Complex64> {
        Some(self.entries[(self.basis.ordinal(row)?, self.basis.ordinal(col)?)])
    }

    pub fn set_element(&mut self, row: FockIndex, col: FockIndex, value: Complex64) -> Result<()> {
        let (r, c) = (self.basis.require(row)?, self.basis.require(col)?);
        self.entries[(r, c)] = value;
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self { basis: self.basis, entries: self.entries.adjoint() }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { basis: self.basis, entries: &self.entries * factor }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Largest entrywise modulus `max |A_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A_ij - B_ij|`; panics on mismatched bases.
    pub fn max_abs_diff(&self, other: &MatrixOperator) -> f64 {
        (self - other).max_abs()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// States whose row or column carries a nonzero entry.
    pub fn support(&self) -> Vec<FockIndex> {
        let dim = self.basis.dim();
        (0..dim)
            .filter(|&k| {
                (0..dim).any(|j| self.entries[(k, j)] != Complex64::ZERO || self.entries[(j, k)] != Complex64::ZERO)
            })
            .filter_map(|k| self.basis.state(k))
            .collect()
    }

    fn check_same_basis(&self, other: &MatrixOperator) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch { left: self.basis.cutoff, right: other.basis.cutoff });
        }
        Ok(())
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&MatrixOperator> for &MatrixOperator {
            type Output = MatrixOperator;

            fn $method(self, rhs: &MatrixOperator) -> MatrixOperator {
                assert_eq!(self.basis, rhs.basis, "operators live on different bases");
                MatrixOperator { basis: self.basis, entries: &self.entries $op &rhs.entries }
            }
        }
    };
}

binary_op!(Add, add, +);
binary_op!(Sub, sub, -);
binary_op!(Mul, mul, *);

impl Neg for &MatrixOperator {
    type Output = MatrixOperator;

    fn neg(self) -> MatrixOperator {
        MatrixOperator { basis: self.basis, entries: -&self.entries }
    }
}

/// Matrix of `a_i` or `a_i†` in the truncated basis.
pub fn ladder_matrix(basis: TruncatedBasis, mode: Mode, ladder: Ladder) -> MatrixOperator {
    let mut op = MatrixOperator::zeros(basis);
    for state in basis.states() {
        let n = state.occupation(mode);
        if n == 0 {
            continue;
        }
        let lowered = match mode {
            Mode::One => FockIndex::new(state.n1 - 1, state.n2),
            Mode::Two => FockIndex::new(state.n1, state.n2 - 1),
        };
        let (hi, lo) = (basis.ordinal(state).unwrap(), basis.ordinal(lowered).unwrap());
        let amp = Complex64::new((n as f64).sqrt(), 0.0);
        match ladder {
            Ladder::Annihilation => op.entries[(lo, hi)] = amp,
            Ladder::Creation => op.entries[(hi, lo)] = amp,
        }
    }
    op
}

/// Number operator `N_i = a_i† a_i`, diagonal with entries `n_i`.
///
/// Built directly on the diagonal so the entries are exact integers; the
/// product of the ladder matrices agrees up to rounding in `√n · √n`.
pub fn number_operator(basis: TruncatedBasis, mode: Mode) -> MatrixOperator {
    let diagonal: Vec<f64> = basis.states().map(|s| s.occupation(mode) as f64).collect();
    MatrixOperator::from_real_diagonal(basis, &diagonal).expect("one entry per state")
}

/// Position or momentum matrix from `x = sqrt(hbar/2) (a + a†)` and
/// `p = -i sqrt(hbar/2) (a - a†)`.
pub fn position_momentum_matrix(basis: TruncatedBasis, quadrature: Quadrature, hbar: f64) -> Result<MatrixOperator> {
    check_hbar(hbar)?;
    let a = ladder_matrix(basis, quadrature.mode(), Ladder::Annihilation);
    let a_dag = a.adjoint();
    let s = (hbar / 2.0).sqrt();
    Ok(match quadrature {
        Quadrature::X1 | Quadrature::X2 => (&a + &a_dag).scale_real(s),
        Quadrature::P1 | Quadrature::P2 => (&a - &a_dag).scale(Complex64::new(0.0, -s)),
    })
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &MatrixOperator, b: &MatrixOperator) -> Result<MatrixOperator> {
    a.check_same_basis(b)?;
    Ok(&(a * b) - &(b * a))
}

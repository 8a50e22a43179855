use crate::error::{check_hbar, Error, Result};
use crate::fock::{FockIndex, MatrixOperator, TruncatedBasis};
use crate::spectral::{ball_norm, BallNorm};
use crate::tolerances::SUPPORT_MARGIN;

/// Real diagonal algebra element `e = Σ e(n1, n2) |n1, n2><n1, n2|`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalElement {
    basis: TruncatedBasis,
    coefficients: Vec<f64>,
}

impl DiagonalElement {
    pub fn zeros(basis: TruncatedBasis) -> Self {
        Self { basis, coefficients: vec![0.0; basis.dim()] }
    }

    /// Coefficients in basis ordinal order.
    pub fn new(basis: TruncatedBasis, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != basis.dim() {
            return Err(Error::CoefficientLength { got: coefficients.len(), expected: basis.dim() });
        }
        if let Some(k) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFiniteCoefficient(basis.state(k).unwrap()));
        }
        Ok(Self { basis, coefficients })
    }

    /// `Σ coefficient · |state><state|`; repeated states accumulate.
    pub fn from_states(basis: TruncatedBasis, terms: &[(FockIndex, f64)]) -> Result<Self> {
        let mut e = Self::zeros(basis);
        for &(state, value) in terms {
            if !value.is_finite() {
                return Err(Error::NonFiniteCoefficient(state));
            }
            let k = basis.require(state)?;
            e.coefficients[k] += value;
        }
        Ok(e)
    }

    pub fn basis(&self) -> TruncatedBasis {
        self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `<state| e |state>`, i.e. `tr(ρ_state e)`; zero outside the basis.
    pub fn coefficient(&self, state: FockIndex) -> f64 {
        self.basis.ordinal(state).map_or(0.0, |k| self.coefficients[k])
    }

    /// `tr((ρ_first - ρ_second) e)`.
    pub fn functional(&self, first: FockIndex, second: FockIndex) -> f64 {
        self.coefficient(first) - self.coefficient(second)
    }

    pub fn support(&self) -> Vec<FockIndex> {
        self.basis.states().zip(&self.coefficients).filter(|(_, &c)| c != 0.0).map(|(s, _)| s).collect()
    }

    /// Largest `(n1, n2)` reached by the support, per mode.
    pub fn support_extent(&self) -> Option<(usize, usize)> {
        self.support().into_iter().fold(None, |acc, s| {
            let (a, b) = acc.unwrap_or((0, 0));
            Some((a.max(s.n1), b.max(s.n2)))
        })
    }

    /// True when the support stays two steps inside the cutoff in both modes.
    pub fn truncation_safe(&self) -> bool {
        self.support().into_iter().all(|s| self.basis.within_margin(s, SUPPORT_MARGIN))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { basis: self.basis, coefficients: self.coefficients.iter().map(|c| c * factor).collect() }
    }

    pub fn to_operator(&self) -> MatrixOperator {
        MatrixOperator::from_real_diagonal(self.basis, &self.coefficients).expect("length checked on construction")
    }

    /// `‖[D, π(e)]‖_op` from the dense Hermitian eigen-solve on the truncated basis.
    pub fn ball_norm_dense(&self, hbar: f64) -> Result<BallNorm> {
        ball_norm(self.basis, &self.to_operator(), hbar)
    }

    /// `‖[D, π(e)]‖_op` on the untruncated Fock space.
    ///
    /// For diagonal `e`, `D1†D1` is block diagonal: the upper component at
    /// `|p+1, q-1>` couples only to the lower component at `|p, q>`, so the norm
    /// is the largest eigenvalue over independent `2×2` sectors. No truncation is
    /// involved; inside the support margin this agrees with [`Self::ball_norm_dense`].
    pub fn ball_norm(&self, hbar: f64) -> Result<f64> {
        check_hbar(hbar)?;
        let grid = Grid::from_element(self);
        Ok(ball_from_gram(grid.gram_norm_sq(), hbar))
    }
}

pub(crate) fn ball_from_gram(gram_norm_sq: f64, hbar: f64) -> f64 {
    (2.0 / hbar * gram_norm_sq.max(0.0)).sqrt()
}

/// Dense real coefficients on `[0, side1) × [0, side2)`, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Grid {
    side1: usize,
    side2: usize,
    data: Vec<f64>,
    roots: Vec<f64>,
}

impl Grid {
    pub(crate) fn zeros(side1: usize, side2: usize) -> Self {
        let roots = (0..side1.max(side2) + 4).map(|k| (k as f64).sqrt()).collect();
        Self { side1, side2, data: vec![0.0; side1 * side2], roots }
    }

    pub(crate) fn from_element(e: &DiagonalElement) -> Self {
        let (m1, m2) = e.support_extent().unwrap_or((0, 0));
        let mut grid = Self::zeros(m1 + 1, m2 + 1);
        for s in e.support() {
            grid.set(s.n1, s.n2, e.coefficient(s));
        }
        grid
    }

    #[inline]
    pub(crate) fn get(&self, p: usize, q: usize) -> f64 {
        if p < self.side1 && q < self.side2 {
            self.data[p * self.side2 + q]
        } else {
            0.0
        }
    }

    #[inline]
    pub(crate) fn set(&mut self, p: usize, q: usize, value: f64) {
        self.data[p * self.side2 + q] = value;
    }

    #[inline]
    pub(crate) fn add(&mut self, p: usize, q: usize, delta: f64) {
        self.data[p * self.side2 + q] += delta;
    }

    /// Weight of `[a1, e]` on `|p-1, q><p, q|`.
    #[inline]
    fn w1(&self, p: usize, q: usize) -> f64 {
        if p == 0 {
            0.0
        } else {
            self.roots[p] * (self.get(p, q) - self.get(p - 1, q))
        }
    }

    /// Weight of `[a2, e]` on `|p, q-1><p, q|`.
    #[inline]
    fn w2(&self, p: usize, q: usize) -> f64 {
        if q == 0 {
            0.0
        } else {
            self.roots[q] * (self.get(p, q) - self.get(p, q - 1))
        }
    }

    /// Upper diagonal entry of `D1†D1` at `|p, q>`: `w2(p, q+1)² + w1(p, q)²`.
    #[inline]
    fn upper(&self, p: usize, q: usize) -> f64 {
        self.w2(p, q + 1).powi(2) + self.w1(p, q).powi(2)
    }

    /// Lower diagonal entry of `D1†D1` at `|p, q>`: `w1(p+1, q)² + w2(p, q)²`.
    #[inline]
    fn lower(&self, p: usize, q: usize) -> f64 {
        self.w1(p + 1, q).powi(2) + self.w2(p, q).powi(2)
    }

    /// Entries `[t, b, c]` of one `2×2` block of `D1†D1`.
    #[inline]
    pub(crate) fn block_entries(&self, block: Block) -> [f64; 3] {
        match block {
            Block::Sector(p, 0) => [0.0, self.lower(p, 0), 0.0],
            Block::Sector(p, q) => {
                let c = self.w1(p + 1, q) * self.w2(p + 1, q) - self.w2(p, q) * self.w1(p + 1, q - 1);
                [self.upper(p + 1, q - 1), self.lower(p, q), c]
            }
            Block::Edge(q) => [self.upper(0, q), 0.0, 0.0],
        }
    }

    /// Every block that can be nonzero for coefficients inside the grid.
    pub(crate) fn blocks(&self) -> Vec<Block> {
        let mut out = Vec::with_capacity(self.side1 * (self.side2 + 1) + self.side2);
        for p in 0..self.side1 {
            for q in 0..=self.side2 {
                out.push(Block::Sector(p, q));
            }
        }
        out.extend((0..self.side2).map(Block::Edge));
        out
    }

    /// Blocks whose entries move when the coefficient at `(p, q)` changes.
    pub(crate) fn blocks_touching(&self, p: usize, q: usize) -> Vec<Block> {
        let mut out = Vec::with_capacity(6);
        for pp in p.saturating_sub(1)..=p {
            for qq in q..=q + 1 {
                if pp < self.side1 && qq <= self.side2 {
                    out.push(Block::Sector(pp, qq));
                }
            }
        }
        if p == 0 {
            out.extend((q.saturating_sub(1)..=q).filter(|&qq| qq < self.side2).map(Block::Edge));
        }
        out
    }

    /// `‖D1‖² = λ_max(D1†D1)`.
    pub(crate) fn gram_norm_sq(&self) -> f64 {
        self.blocks().into_iter().map(|b| top_eigenvalue(self.block_entries(b))).fold(0.0, f64::max)
    }
}

/// A `2×2` block of `D1†D1`. `Sector(p, q)` pairs the lower component at
/// `|p, q>` with the upper one at `|p+1, q-1>` (a `1×1` block when `q = 0`);
/// `Edge(q)` is the unpaired upper component at `|0, q>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Block {
    Sector(usize, usize),
    Edge(usize),
}

/// Sparse linear form `Σ weight · e(cell)` over at most two cells.
pub(crate) type LinearForm = [((usize, usize), f64); 2];

const ZERO_FORM: LinearForm = [((0, 0), 0.0); 2];

/// `w1(p, q) = √p (e(p, q) - e(p-1, q))`.
fn w1_form(p: usize, q: usize) -> LinearForm {
    if p == 0 {
        return ZERO_FORM;
    }
    let r = (p as f64).sqrt();
    [((p, q), r), ((p - 1, q), -r)]
}

/// `w2(p, q) = √q (e(p, q) - e(p, q-1))`.
fn w2_form(p: usize, q: usize) -> LinearForm {
    if q == 0 {
        return ZERO_FORM;
    }
    let r = (q as f64).sqrt();
    [((p, q), r), ((p, q - 1), -r)]
}

fn negated(form: LinearForm) -> LinearForm {
    form.map(|(cell, w)| (cell, -w))
}

impl Block {
    pub(crate) fn is_single(self) -> bool {
        matches!(self, Block::Sector(_, 0) | Block::Edge(_))
    }

    /// Entries `[k1, k2, k3, k4]` of `K = [[k1, k2], [k3, k4]]` with `KᵀK` equal
    /// to this block: `t = k1² + k3²`, `b = k2² + k4²`, `c = k1 k2 + k3 k4`.
    pub(crate) fn factor_forms(self) -> [LinearForm; 4] {
        match self {
            Block::Sector(p, 0) => [ZERO_FORM, w1_form(p + 1, 0), ZERO_FORM, ZERO_FORM],
            Block::Sector(p, q) => {
                [w2_form(p + 1, q), w1_form(p + 1, q), w1_form(p + 1, q - 1), negated(w2_form(p, q))]
            }
            Block::Edge(q) => [w2_form(0, q + 1), ZERO_FORM, ZERO_FORM, ZERO_FORM],
        }
    }
}

/// Larger eigenvalue of `[[t, c], [c, b]]`.
#[inline]
pub(crate) fn top_eigenvalue([t, b, c]: [f64; 3]) -> f64 {
    0.5 * (t + b) + (0.25 * (t - b) * (t - b) + c * c).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build_basis;
    use proptest::prelude::*;

    fn element_on(cutoff: usize, extent: usize, values: &[f64]) -> DiagonalElement {
        let basis = build_basis(cutoff).unwrap();
        let mut terms = Vec::new();
        let mut it = values.iter();
        for n1 in 0..=extent {
            for n2 in 0..=extent {
                terms.push((FockIndex::new(n1, n2), *it.next().unwrap()));
            }
        }
        DiagonalElement::from_states(basis, &terms).unwrap()
    }

    #[test]
    fn construction_checks() {
        let basis = build_basis(2).unwrap();
        assert!(matches!(DiagonalElement::new(basis, vec![0.0; 3]), Err(Error::CoefficientLength { .. })));
        assert!(matches!(
            DiagonalElement::from_states(basis, &[(FockIndex::new(3, 0), 1.0)]),
            Err(Error::StateOutsideBasis { .. })
        ));
        assert!(matches!(
            DiagonalElement::from_states(basis, &[(FockIndex::VACUUM, f64::NAN)]),
            Err(Error::NonFiniteCoefficient(_))
        ));
    }

    #[test]
    fn margin_flag() {
        let basis = build_basis(4).unwrap();
        let inside = DiagonalElement::from_states(basis, &[(FockIndex::new(2, 1), 1.0)]).unwrap();
        let edge = DiagonalElement::from_states(basis, &[(FockIndex::new(1, 3), 1.0)]).unwrap();
        assert!(inside.truncation_safe());
        assert!(!edge.truncation_safe());
        assert_eq!(edge.support_extent(), Some((1, 3)));
        assert_eq!(DiagonalElement::zeros(basis).support_extent(), None);
    }

    #[test]
    fn touching_blocks_are_complete() {
        let mut grid = Grid::zeros(4, 3);
        for (k, v) in [0.3, -1.1, 0.7, 2.0, 0.1, -0.4, 1.3, 0.9, -0.8, 0.5, 0.2, -1.7].iter().enumerate() {
            grid.set(k / 3, k % 3, *v);
        }
        let all = grid.blocks();
        for p in 0..4 {
            for q in 0..3 {
                let before: Vec<[f64; 3]> = all.iter().map(|&b| grid.block_entries(b)).collect();
                grid.add(p, q, 0.37);
                let touched = grid.blocks_touching(p, q);
                for (b, old) in all.iter().zip(&before) {
                    if !touched.contains(b) {
                        assert_eq!(grid.block_entries(*b), *old, "{b:?} moved for cell ({p}, {q})");
                    }
                }
                grid.add(p, q, -0.37);
            }
        }
    }

    #[test]
    fn factor_forms_reproduce_blocks() {
        let mut grid = Grid::zeros(3, 4);
        for k in 0..12 {
            grid.set(k / 4, k % 4, ((k * 7) % 5) as f64 - 1.3);
        }
        for block in grid.blocks() {
            let k = block.factor_forms().map(|form| form.iter().map(|&((p, q), w)| w * grid.get(p, q)).sum::<f64>());
            let [t, b, c] = grid.block_entries(block);
            assert!((t - (k[0] * k[0] + k[2] * k[2])).abs() < 1e-12, "{block:?}");
            assert!((b - (k[1] * k[1] + k[3] * k[3])).abs() < 1e-12, "{block:?}");
            assert!((c - (k[0] * k[1] + k[2] * k[3])).abs() < 1e-12, "{block:?}");
        }
    }

    #[test]
    fn dense_oracle_survives_degenerate_gram() {
        // Coefficients as produced by the two-point optimizer; the plain Hermitian
        // eigen-solver returns non-finite values on the resulting Gram matrix.
        let basis = build_basis(6).unwrap();
        let states = [(FockIndex::new(0, 4), 0.2886751345948128), (FockIndex::new(1, 3), -0.2886751345943122)];
        let e = DiagonalElement::from_states(basis, &states).unwrap();
        let dense = e.ball_norm_dense(1.0).unwrap().value;
        assert!((dense - e.ball_norm(1.0).unwrap()).abs() < 1e-12, "{dense}");
        assert!((dense - 1.0).abs() < 1e-12, "{dense}");
    }

    #[test]
    fn vacuum_projector_sector() {
        let basis = build_basis(3).unwrap();
        let e = DiagonalElement::from_states(basis, &[(FockIndex::VACUUM, 1.0)]).unwrap();
        // ‖D1‖² = 2 for the bare vacuum projector.
        assert!((e.ball_norm(1.0).unwrap() - 2.0).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn sector_route_matches_dense(values in prop::collection::vec(-2.0f64..2.0, 16), hbar in 0.2f64..3.0) {
            let e = element_on(5, 3, &values);
            let fast = e.ball_norm(hbar).unwrap();
            let dense = e.ball_norm_dense(hbar).unwrap();
            prop_assert!(dense.truncation_safe);
            prop_assert!((fast - dense.value).abs() <= 1e-9 * dense.value.max(1.0), "{} vs {}", fast, dense.value);
        }

        #[test]
        fn sector_route_is_a_seminorm(
            a in prop::collection::vec(-2.0f64..2.0, 9),
            b in prop::collection::vec(-2.0f64..2.0, 9),
            alpha in -3.0f64..3.0,
        ) {
            let e = element_on(4, 2, &a);
            let f = element_on(4, 2, &b);
            let ne = e.ball_norm(1.0).unwrap();
            let nf = f.ball_norm(1.0).unwrap();
            let scaled = e.scaled(alpha).ball_norm(1.0).unwrap();
            prop_assert!((scaled - alpha.abs() * ne).abs() <= 1e-12 * ne.max(1.0));
            let sum: Vec<f64> = e.coefficients().iter().zip(f.coefficients()).map(|(x, y)| x + y).collect();
            let ns = DiagonalElement::new(e.basis(), sum).unwrap().ball_norm(1.0).unwrap();
            prop_assert!(ns <= ne + nf + 1e-12);
        }
    }
}

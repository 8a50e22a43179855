use nalgebra::Matrix4;
use num_complex::Complex64;

/// The four Euclidean Dirac matrices in the chiral-off-diagonal representation
/// used to assemble the Dirac operator.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    matrices: [Matrix4<Complex64>; 4],
}

const O: Complex64 = Complex64::ZERO;
const R: Complex64 = Complex64::ONE;
const I: Complex64 = Complex64::I;

/// Builds `γ¹ … γ⁴`.
pub fn build_gammas() -> GammaSet {
    #[rustfmt::skip]
    let g1 = Matrix4::new(
        O,  O,  O,  I,
        O,  O,  I,  O,
        O, -I,  O,  O,
       -I,  O,  O,  O,
    );
    #[rustfmt::skip]
    let g2 = Matrix4::new(
        O,  O,  O,  R,
        O,  O, -R,  O,
        O, -R,  O,  O,
        R,  O,  O,  O,
    );
    #[rustfmt::skip]
    let g3 = Matrix4::new(
        O,  O,  I,  O,
        O,  O,  O, -I,
       -I,  O,  O,  O,
        O,  I,  O,  O,
    );
    #[rustfmt::skip]
    let g4 = Matrix4::new(
        O,  O,  R,  O,
        O,  O,  O,  R,
        R,  O,  O,  O,
        O,  R,  O,  O,
    );
    GammaSet { matrices: [g1, g2, g3, g4] }
}

impl GammaSet {
    /// `γᵏ` for `k` in `1..=4`.
    pub fn gamma(&self, k: usize) -> &Matrix4<Complex64> {
        assert!((1..=4).contains(&k), "gamma index {k} outside 1..=4");
        &self.matrices[k - 1]
    }

    pub fn matrices(&self) -> &[Matrix4<Complex64>; 4] {
        &self.matrices
    }

    /// `γᵏγˡ + γˡγᵏ`.
    pub fn anticommutator(&self, k: usize, l: usize) -> Matrix4<Complex64> {
        let (a, b) = (self.gamma(k), self.gamma(l));
        a * b + b * a
    }

    /// Entrywise deviation of `{γᵏ, γˡ}` from `2δₖₗ I₄`, one entry per ordered `(k, l)`.
    pub fn clifford_deviations(&self) -> Vec<((usize, usize), f64)> {
        let mut out = Vec::with_capacity(16);
        for k in 1..=4 {
            for l in 1..=4 {
                let target = if k == l { Matrix4::identity() * Complex64::new(2.0, 0.0) } else { Matrix4::zeros() };
                let dev = (self.anticommutator(k, l) - target).iter().map(|z| z.norm()).fold(0.0, f64::max);
                out.push(((k, l), dev));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_relations_are_exact() {
        let g = build_gammas();
        let devs = g.clifford_deviations();
        assert_eq!(devs.len(), 16);
        assert!(devs.iter().all(|&(_, d)| d == 0.0), "{devs:?}");
    }

    #[test]
    fn gamma_one_squares_to_identity() {
        let g = build_gammas();
        assert_eq!(g.gamma(1) * g.gamma(1), Matrix4::identity());
    }

    #[test]
    fn gamma_one_two_anticommute() {
        let g = build_gammas();
        assert_eq!(g.anticommutator(1, 2), Matrix4::zeros());
    }

    #[test]
    fn gammas_are_hermitian_and_traceless() {
        let g = build_gammas();
        for m in g.matrices() {
            assert_eq!(m.adjoint(), *m);
            assert_eq!(m.trace(), Complex64::ZERO);
        }
    }
}

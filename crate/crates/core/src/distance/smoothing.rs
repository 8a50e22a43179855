//! Log-trace-exp smoothing of `φ(e) = λ_max(D1†D1)` and a Newton continuation
//! on it.
//!
//! Every block of `D1†D1` is `KᵀK` for a `2×2` factor `K` linear in `e`, so
//! `F_τ(e) = τ log tr exp(D1†D1 / τ)` is smooth, convex, and sits within
//! `τ log(dim)` above `φ`. Its gradient and Hessian are assembled block by block.

use nalgebra::{DMatrix, DVector};

use super::element::{top_eigenvalue, Block};

/// Continuation stops once `τ` drops below this fraction of `φ`.
const TAU_FLOOR: f64 = 1e-10;
const MAX_NEWTON: usize = 100;

/// A block factor with its cells replaced by variable indices: `k[i] += w e[var]`.
struct Factor {
    single: bool,
    terms: Vec<(usize, usize, f64)>,
}

pub(crate) struct SmoothedObjective {
    factors: Vec<Factor>,
    vars: usize,
    /// Search directions as sets of variables stepped together.
    columns: Vec<Vec<usize>>,
}

/// Smoothed block value with gradient and Hessian in the factor entries `k`.
struct BlockModel {
    h: f64,
    grad: [f64; 4],
    hess: [[f64; 4]; 4],
}

fn block_value(k: [f64; 4], single: bool, tau: f64) -> f64 {
    let norm_sq = k.iter().map(|x| x * x).sum::<f64>();
    if single {
        return norm_sq;
    }
    let u = 0.5 * (k[0] * k[0] + k[2] * k[2] - k[1] * k[1] - k[3] * k[3]);
    let c = k[0] * k[1] + k[2] * k[3];
    let r = (u * u + c * c).sqrt();
    0.5 * norm_sq + r + tau * (-2.0 * r / tau).exp().ln_1p()
}

/// `h = m + τ log(2 cosh(ρ/τ))` with `m = ‖K‖²_F / 2` and `ρ` the eigenvalue
/// half-gap of `KᵀK`, so that `h = τ log(e^{λ+/τ} + e^{λ-/τ})`.
fn block_model(k: [f64; 4], single: bool, tau: f64) -> BlockModel {
    if single {
        let mut hess = [[0.0; 4]; 4];
        for (i, row) in hess.iter_mut().enumerate() {
            row[i] = 2.0;
        }
        return BlockModel { h: k.iter().map(|x| x * x).sum(), grad: k.map(|x| 2.0 * x), hess };
    }
    let u = 0.5 * (k[0] * k[0] + k[2] * k[2] - k[1] * k[1] - k[3] * k[3]);
    let c = k[0] * k[1] + k[2] * k[3];
    let du = [k[0], -k[1], k[2], -k[3]];
    let dc = [k[1], k[0], k[3], k[2]];
    let r = (u * u + c * c).sqrt();
    let x = r / tau;
    let e = (-2.0 * x).exp();
    // q = tanh(x)/ρ, κ = (sech²(x)/τ - q)/ρ², with their small-x limits.
    let (q, kappa) = if x < 1e-4 {
        ((1.0 - x * x / 3.0) / tau, -2.0 / (3.0 * tau * tau * tau))
    } else {
        let q = (1.0 - e) / (1.0 + e) / r;
        (q, (4.0 * e / ((1.0 + e) * (1.0 + e)) / tau - q) / (r * r))
    };
    let v: [f64; 4] = std::array::from_fn(|i| u * du[i] + c * dc[i]);
    let grad = std::array::from_fn(|i| k[i] + q * v[i]);
    let sign = [1.0, -1.0, 1.0, -1.0];
    let hess = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut hij = q * (du[i] * du[j] + dc[i] * dc[j]) + kappa * v[i] * v[j];
            if i == j {
                hij += 1.0 + q * u * sign[i];
            }
            // ∇²c pairs (k1, k2) and (k3, k4).
            if i ^ 1 == j {
                hij += q * c;
            }
            hij
        })
    });
    BlockModel { h: 0.5 * k.iter().map(|x| x * x).sum::<f64>() + r + tau * e.ln_1p(), grad, hess }
}

impl SmoothedObjective {
    /// `var_of` maps a grid cell to its variable index, `None` for cells held at zero.
    pub(crate) fn new(
        blocks: &[Block],
        var_of: impl Fn((usize, usize)) -> Option<usize>,
        vars: usize,
        columns: Vec<Vec<usize>>,
    ) -> Self {
        let factors = blocks
            .iter()
            .map(|&block| {
                let terms = block
                    .factor_forms()
                    .iter()
                    .enumerate()
                    .flat_map(|(i, form)| form.iter().map(move |&(cell, w)| (i, cell, w)))
                    .filter(|&(_, _, w)| w != 0.0)
                    .filter_map(|(i, cell, w)| var_of(cell).map(|v| (i, v, w)))
                    .collect::<Vec<_>>();
                Factor { single: block.is_single(), terms }
            })
            .filter(|f| !f.terms.is_empty())
            .collect();
        Self { factors, vars, columns }
    }

    fn factor_entries(f: &Factor, e: &[f64]) -> [f64; 4] {
        let mut k = [0.0; 4];
        for &(i, v, w) in &f.terms {
            k[i] += w * e[v];
        }
        k
    }

    /// Exact `λ_max(D1†D1)`.
    pub(crate) fn phi(&self, e: &[f64]) -> f64 {
        self.factors
            .iter()
            .map(|f| {
                let k = Self::factor_entries(f, e);
                if f.single {
                    k.iter().map(|x| x * x).sum()
                } else {
                    top_eigenvalue([k[0] * k[0] + k[2] * k[2], k[1] * k[1] + k[3] * k[3], k[0] * k[1] + k[2] * k[3]])
                }
            })
            .fold(0.0, f64::max)
    }

    pub(crate) fn value(&self, e: &[f64], tau: f64) -> f64 {
        let h: Vec<f64> = self.factors.iter().map(|f| block_value(Self::factor_entries(f, e), f.single, tau)).collect();
        log_sum_exp(&h, tau)
    }

    /// Value, gradient and Hessian of `F_τ` along the search columns.
    fn model(&self, e: &[f64], tau: f64) -> (f64, DVector<f64>, DMatrix<f64>) {
        let models: Vec<BlockModel> =
            self.factors.iter().map(|f| block_model(Self::factor_entries(f, e), f.single, tau)).collect();
        let h: Vec<f64> = models.iter().map(|m| m.h).collect();
        let value = log_sum_exp(&h, tau);

        // Per-block gradients in variable space.
        let n = self.vars;
        let mut mean = DVector::zeros(n);
        let mut weights = Vec::with_capacity(models.len());
        let mut grads = Vec::with_capacity(models.len());
        for (f, m) in self.factors.iter().zip(&models) {
            let p = ((m.h - value) / tau).exp();
            let mut g: Vec<(usize, f64)> = Vec::with_capacity(f.terms.len());
            for &(i, v, w) in &f.terms {
                match g.iter_mut().find(|(var, _)| *var == v) {
                    Some(slot) => slot.1 += w * m.grad[i],
                    None => g.push((v, w * m.grad[i])),
                }
            }
            for &(v, gv) in &g {
                mean[v] += p * gv;
            }
            weights.push(p);
            grads.push(g);
        }

        // Σ p (∇²h + (∇h - ∇F)(∇h - ∇F)ᵀ / τ).
        let mut hess = DMatrix::zeros(n, n);
        let mut centered = DVector::zeros(n);
        for ((f, m), (&p, g)) in self.factors.iter().zip(&models).zip(weights.iter().zip(&grads)) {
            if p < 1e-300 {
                continue;
            }
            for &(i, vi, wi) in &f.terms {
                for &(j, vj, wj) in &f.terms {
                    hess[(vi, vj)] += p * wi * wj * m.hess[i][j];
                }
            }
            centered.copy_from(&mean);
            centered.neg_mut();
            for &(v, gv) in g {
                centered[v] += gv;
            }
            hess.ger(p / tau, &centered, &centered, 1.0);
        }

        let cols = &self.columns;
        let grad = DVector::from_iterator(cols.len(), cols.iter().map(|c| c.iter().map(|&v| mean[v]).sum()));
        let hess = DMatrix::from_fn(cols.len(), cols.len(), |a, b| {
            cols[a].iter().flat_map(|&va| cols[b].iter().map(move |&vb| (va, vb))).map(|ix| hess[ix]).sum()
        });
        (value, grad, hess)
    }

    fn advance(&self, e: &[f64], step: &DVector<f64>, t: f64) -> Vec<f64> {
        let mut out = e.to_vec();
        for (col, &d) in self.columns.iter().zip(step.iter()) {
            for &v in col {
                out[v] += t * d;
            }
        }
        out
    }

    /// Damped Newton on `F_τ`, annealing `τ` from `φ/10` down to `TAU_FLOOR·φ`.
    /// Returns the number of Newton steps taken.
    pub(crate) fn minimize(&self, e: &mut Vec<f64>) -> usize {
        let mut steps = 0;
        let mut tau = 0.1 * self.phi(e);
        if tau <= 0.0 {
            return 0;
        }
        loop {
            let last = tau <= TAU_FLOOR * self.phi(e);
            for _ in 0..MAX_NEWTON {
                let (f, g, h) = self.model(e, tau);
                let Some(d) = newton_direction(h, &g) else { break };
                let decrement = -g.dot(&d);
                let tol = if last { 1e-14 * f } else { 1e-2 * tau };
                if decrement.is_nan() || decrement <= tol {
                    break;
                }
                let mut t = 1.0;
                let accepted = loop {
                    let trial = self.advance(e, &d, t);
                    if self.value(&trial, tau) <= f - 0.25 * t * decrement {
                        break Some(trial);
                    }
                    t *= 0.5;
                    if t < 1e-12 {
                        break None;
                    }
                };
                match accepted {
                    Some(next) => *e = next,
                    None => break,
                }
                steps += 1;
            }
            if last {
                return steps;
            }
            tau = (0.1 * tau).max(TAU_FLOOR * self.phi(e));
        }
    }
}

/// Solves `H d = -g`, adding a diagonal shift if `H` is not numerically positive definite.
fn newton_direction(h: DMatrix<f64>, g: &DVector<f64>) -> Option<DVector<f64>> {
    let scale = h.diagonal().iter().copied().fold(0.0, f64::max);
    let mut shift = 0.0;
    for _ in 0..20 {
        let mut shifted = h.clone();
        for i in 0..shifted.nrows() {
            shifted[(i, i)] += shift;
        }
        if let Some(chol) = shifted.cholesky() {
            return Some(-chol.solve(g));
        }
        shift = if shift == 0.0 { 1e-14 * scale.max(1e-300) } else { shift * 100.0 };
    }
    None
}

fn log_sum_exp(values: &[f64], tau: f64) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + tau * values.iter().map(|v| ((v - max) / tau).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_model_derivatives() {
        let tau = 0.07;
        for (k, single) in
            [([0.3, -0.8, 1.1, 0.4], false), ([0.5, 0.5, 0.5, -0.5], false), ([0.0, 0.9, 0.0, 0.0], true)]
        {
            let m = block_model(k, single, tau);
            assert!((m.h - block_value(k, single, tau)).abs() < 1e-14);
            let eps = 1e-6;
            for i in 0..4 {
                let mut kp = k;
                let mut km = k;
                kp[i] += eps;
                km[i] -= eps;
                let fd = (block_value(kp, single, tau) - block_value(km, single, tau)) / (2.0 * eps);
                assert!((m.grad[i] - fd).abs() < 1e-7, "grad {i}: {} vs {fd}", m.grad[i]);
                let (gp, gm) = (block_model(kp, single, tau).grad, block_model(km, single, tau).grad);
                for j in 0..4 {
                    let fd = (gp[j] - gm[j]) / (2.0 * eps);
                    assert!((m.hess[i][j] - fd).abs() < 1e-5, "hess {i}{j}: {} vs {fd}", m.hess[i][j]);
                }
            }
        }
    }

    #[test]
    fn block_value_brackets_top_eigenvalue() {
        let k = [0.3, -0.8, 1.1, 0.4];
        let top = top_eigenvalue([k[0] * k[0] + k[2] * k[2], k[1] * k[1] + k[3] * k[3], k[0] * k[1] + k[2] * k[3]]);
        for tau in [1e-1, 1e-3, 1e-6] {
            let h = block_value(k, false, tau);
            assert!(h >= top && h <= top + tau * 2f64.ln() + 1e-15);
        }
    }
}

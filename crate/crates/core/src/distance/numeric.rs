use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::element::{top_eigenvalue, Block, DiagonalElement, Grid};
use super::smoothing::SmoothedObjective;
use super::{DistanceResult, Method, StatePair};
use crate::error::{check_hbar, Error, Result};
use crate::fock::{FockIndex, TruncatedBasis};
use crate::tolerances::{SATURATION, SUPPORT_MARGIN, SWEEP_IMPROVEMENT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NumericOptions {
    /// Support box: the pair's bounding box grown by this many quanta per side.
    pub support_pad: usize,
    /// Random starting points, on top of the fixed two-point start.
    pub restarts: usize,
    pub seed: u64,
    /// Cap on exact coordinate sweeps per start.
    pub max_sweeps: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self { support_pad: 2, restarts: 8, seed: 42, max_sweeps: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericOptimum {
    pub pair: StatePair,
    pub hbar: f64,
    pub options: NumericOptions,
    /// Seed actually driving this pair's restarts (mixed from `options.seed` and the pair).
    pub pair_seed: u64,
    pub value: f64,
    /// Best element, rescaled onto the ball boundary.
    pub element: DiagonalElement,
    /// Dense-oracle ball norm of `element`.
    pub ball_norm: f64,
    pub truncation_safe: bool,
    /// Final ratio per start; index 0 is the two-point start.
    pub restart_values: Vec<f64>,
    pub newton_steps: usize,
    pub sweeps: usize,
}

/// SplitMix64 finalizer over the seed and the pair's four indices.
fn pair_seed(seed: u64, pair: StatePair) -> u64 {
    let mut z = seed;
    for v in [pair.first.n1, pair.first.n2, pair.second.n1, pair.second.n2] {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(v as u64);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// `c0 + c1 s + c2 s²`.
#[derive(Debug, Clone, Copy)]
struct Quadratic([f64; 3]);

impl Quadratic {
    fn fit(minus: f64, zero: f64, plus: f64) -> Self {
        Self([zero, 0.5 * (plus - minus), 0.5 * (plus + minus) - zero])
    }

    #[inline]
    fn eval(&self, s: f64) -> f64 {
        let [a, b, c] = self.0;
        a + s * (b + s * c)
    }
}

/// Top eigenvalue of a block whose entries are quadratic in the step `s`.
#[derive(Debug, Clone, Copy)]
struct BlockPath([Quadratic; 3]);

impl BlockPath {
    #[inline]
    fn top(&self, s: f64) -> f64 {
        top_eigenvalue(self.0.map(|q| q.eval(s)))
    }
}

/// One search direction: unit steps on `cells`.
struct Direction {
    cells: Vec<(usize, usize)>,
    blocks: Vec<usize>,
}

/// Minimizes `φ = ‖D1(e)‖²` over the support box with `e_first - e_second = 1`.
struct Problem {
    grid: Grid,
    blocks: Vec<Block>,
    directions: Vec<Direction>,
    /// Top eigenvalue of every block at the current point.
    lam: Vec<f64>,
    first: (usize, usize),
    second: (usize, usize),
    box_cells: Vec<(usize, usize)>,
    smoothed: SmoothedObjective,
}

impl Problem {
    fn new(pair: StatePair, pad: usize) -> Self {
        let (a, b) = (pair.first, pair.second);
        let hi = (a.n1.max(b.n1) + pad, a.n2.max(b.n2) + pad);
        let lo = (a.n1.min(b.n1).saturating_sub(pad), a.n2.min(b.n2).saturating_sub(pad));
        let grid = Grid::zeros(hi.0 + 1, hi.1 + 1);
        let blocks = grid.blocks();
        let index = |blk: Block| blocks.iter().position(|&x| x == blk).expect("grid block");
        let first = (a.n1, a.n2);
        let second = (b.n1, b.n2);
        let box_cells: Vec<_> = (lo.0..=hi.0).flat_map(|p| (lo.1..=hi.1).map(move |q| (p, q))).collect();
        let mut directions = Vec::with_capacity(box_cells.len() - 1);
        let mut make = |cells: Vec<(usize, usize)>| {
            let mut idx: Vec<usize> = cells.iter().flat_map(|&(p, q)| grid.blocks_touching(p, q)).map(&index).collect();
            idx.sort_unstable();
            idx.dedup();
            directions.push(Direction { cells, blocks: idx });
        };
        for &cell in &box_cells {
            if cell != first && cell != second {
                make(vec![cell]);
            }
        }
        make(vec![first, second]);

        let var_of = |cell: (usize, usize)| box_cells.iter().position(|&c| c == cell);
        let columns = directions.iter().map(|d| d.cells.iter().map(|&c| var_of(c).unwrap()).collect()).collect();
        let smoothed = SmoothedObjective::new(&blocks, var_of, box_cells.len(), columns);
        let lam = vec![0.0; blocks.len()];
        Self { grid, blocks, directions, lam, first, second, box_cells, smoothed }
    }

    /// Sets the box values and shifts `e_first` so the gap is exactly 1.
    fn load(&mut self, values: &[f64]) {
        for (&(p, q), &v) in self.box_cells.iter().zip(values) {
            self.grid.set(p, q, v);
        }
        let shift = self.grid.get(self.second.0, self.second.1) + 1.0 - self.grid.get(self.first.0, self.first.1);
        self.grid.add(self.first.0, self.first.1, shift);
        self.refresh();
    }

    fn values(&self) -> Vec<f64> {
        self.box_cells.iter().map(|&(p, q)| self.grid.get(p, q)).collect()
    }

    fn refresh(&mut self) {
        for (l, &b) in self.lam.iter_mut().zip(&self.blocks) {
            *l = top_eigenvalue(self.grid.block_entries(b));
        }
    }

    fn phi(&self) -> f64 {
        self.lam.iter().copied().fold(0.0, f64::max)
    }

    fn step(&mut self, d: usize, s: f64) {
        for &(p, q) in &self.directions[d].cells {
            self.grid.add(p, q, s);
        }
    }

    fn paths(&self, d: usize) -> Vec<BlockPath> {
        let sample = |g: &Grid| -> Vec<[f64; 3]> {
            self.directions[d].blocks.iter().map(|&i| g.block_entries(self.blocks[i])).collect()
        };
        let zero = sample(&self.grid);
        let mut g = self.grid.clone();
        for &(p, q) in &self.directions[d].cells {
            g.add(p, q, 1.0);
        }
        let plus = sample(&g);
        for &(p, q) in &self.directions[d].cells {
            g.add(p, q, -2.0);
        }
        let minus = sample(&g);
        (0..zero.len())
            .map(|j| BlockPath(std::array::from_fn(|k| Quadratic::fit(minus[j][k], zero[j][k], plus[j][k]))))
            .collect()
    }

    fn rest_max(&self, d: usize) -> f64 {
        let touched = &self.directions[d].blocks;
        self.lam
            .iter()
            .enumerate()
            .filter(|(i, _)| touched.binary_search(i).is_err())
            .map(|(_, &l)| l)
            .fold(0.0, f64::max)
    }

    /// One coordinate sweep on the exact `φ`; returns `φ` afterwards.
    fn exact_sweep(&mut self) -> f64 {
        for d in 0..self.directions.len() {
            let paths = self.paths(d);
            let rest = self.rest_max(d);
            let f = |s: f64| paths.iter().map(|p| p.top(s)).fold(rest, f64::max);
            let s = golden_minimize(f, 1e-3 * (1.0 + self.phi()).sqrt());
            if s != 0.0 {
                self.step(d, s);
                for k in 0..self.directions[d].blocks.len() {
                    let i = self.directions[d].blocks[k];
                    self.lam[i] = top_eigenvalue(self.grid.block_entries(self.blocks[i]));
                }
            }
        }
        self.phi()
    }

    /// Newton continuation on the smoothed `φ`, then exact coordinate sweeps
    /// until a full sweep raises the ratio `1/sqrt(φ)` by less than the sweep
    /// tolerance. Returns `(newton_steps, sweeps)`.
    fn minimize(&mut self, max_sweeps: usize) -> (usize, usize) {
        let mut e = self.values();
        let newton_steps = self.smoothed.minimize(&mut e);
        self.load(&e);
        let mut ratio = self.phi().sqrt().recip();
        let mut sweeps = 0;
        while sweeps < max_sweeps {
            let next = self.exact_sweep().sqrt().recip();
            sweeps += 1;
            if next - ratio < SWEEP_IMPROVEMENT {
                break;
            }
            ratio = next;
        }
        self.refresh();
        (newton_steps, sweeps)
    }
}

/// Golden-section search for the minimum of a convex (possibly nonsmooth)
/// function, bracketed by doubling steps away from 0. Returns 0 unless it improves.
fn golden_minimize(f: impl Fn(f64) -> f64, step: f64) -> f64 {
    let f0 = f(0.0);
    let (fp, fm) = (f(step), f(-step));
    let sign = if fp < f0 {
        1.0
    } else if fm < f0 {
        -1.0
    } else {
        return golden_section(&f, -step, step, f0);
    };
    let mut inner = 0.0;
    let mut width = step;
    let mut outer = sign * step;
    let mut f_outer = if sign > 0.0 { fp } else { fm };
    loop {
        let next = outer + sign * width * 2.0;
        let f_next = f(next);
        if f_next >= f_outer {
            let (a, b) = if sign > 0.0 { (inner, next) } else { (next, inner) };
            return golden_section(&f, a, b, f0);
        }
        inner = outer;
        outer = next;
        f_outer = f_next;
        width *= 2.0;
        if width > 1e12 {
            return 0.0;
        }
    }
}

fn golden_section(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f0: f64) -> f64 {
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    let (x, fx) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if fx < f0 {
        x
    } else {
        0.0
    }
}

/// Supremum of `e_first - e_second` over diagonal elements supported in the
/// padded bounding box of the pair, subject to `‖[D, π(e)]‖ <= 1`.
///
/// Equivalently the ratio `(e_first - e_second) / ball_norm(e)` is maximized.
/// With the numerator fixed to 1, each start minimizes `‖D1(e)‖²`: a Newton
/// continuation on the log-trace-exp smoothing brings it close to the optimum,
/// and exact coordinate sweeps finish it, stopping once a full sweep raises the
/// ratio by less than `1e-10`. There is a two-point start plus
/// `options.restarts` random ones, all drawn from a stream seeded by the pair and
/// `options.seed`. The block spectrum is exact on the untruncated Fock space.
/// The returned element is re-checked with the dense oracle on `basis`, which
/// must leave room for the support margin.
pub fn numeric_supremum(
    pair: StatePair,
    hbar: f64,
    basis: TruncatedBasis,
    options: &NumericOptions,
) -> Result<NumericOptimum> {
    check_hbar(hbar)?;
    if pair.is_diagonal() {
        return Err(Error::IdenticalStates(pair.first));
    }
    let required = pair.max_occupation() + options.support_pad + SUPPORT_MARGIN;
    if basis.cutoff() < required {
        return Err(Error::TruncationUnsafe { cutoff: basis.cutoff(), required });
    }

    let seed = pair_seed(options.seed, pair);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut problem = Problem::new(pair, options.support_pad);
    let (a, b) = (problem.first, problem.second);

    let mut restart_values = Vec::with_capacity(options.restarts + 1);
    let mut best: Option<(f64, Grid)> = None;
    let (mut newton_steps, mut sweeps) = (0, 0);
    for restart in 0..=options.restarts {
        let start: Vec<f64> = if restart == 0 {
            problem
                .box_cells
                .iter()
                .map(|&cell| {
                    if cell == a {
                        0.5
                    } else if cell == b {
                        -0.5
                    } else {
                        0.0
                    }
                })
                .collect()
        } else {
            problem.box_cells.iter().map(|_| rng.random_range(-1.0..=1.0)).collect()
        };
        problem.load(&start);
        let (n, s) = problem.minimize(options.max_sweeps);
        newton_steps += n;
        sweeps += s;
        let phi = problem.phi();
        restart_values.push(ratio_value(phi, hbar));
        if best.as_ref().is_none_or(|(p, _)| phi < *p) {
            best = Some((phi, problem.grid.clone()));
        }
    }

    let (phi, grid) = best.expect("at least one start");
    let value = ratio_value(phi, hbar);
    let scale = value / (grid.get(a.0, a.1) - grid.get(b.0, b.1));
    let terms: Vec<(FockIndex, f64)> =
        problem.box_cells.iter().map(|&(p, q)| (FockIndex::new(p, q), scale * grid.get(p, q))).collect();
    let element = DiagonalElement::from_states(basis, &terms)?;
    let dense = element.ball_norm_dense(hbar)?;
    Ok(NumericOptimum {
        pair,
        hbar,
        options: *options,
        pair_seed: seed,
        value,
        element,
        ball_norm: dense.value,
        truncation_safe: dense.truncation_safe,
        restart_values,
        newton_steps,
        sweeps,
    })
}

/// `1 / ball_norm` for an element with unit gap and `‖D1‖² = φ`.
fn ratio_value(phi: f64, hbar: f64) -> f64 {
    (hbar / (2.0 * phi)).sqrt()
}

/// [`numeric_supremum`] with default restarts and seed.
pub fn numeric_distance(
    pair: StatePair,
    hbar: f64,
    basis: TruncatedBasis,
    support_pad: usize,
) -> Result<DistanceResult> {
    let options = NumericOptions { support_pad, ..NumericOptions::default() };
    Ok(numeric_supremum(pair, hbar, basis, &options)?.into())
}

impl From<NumericOptimum> for DistanceResult {
    fn from(opt: NumericOptimum) -> Self {
        let (first, second) = (opt.pair.first, opt.pair.second);
        DistanceResult {
            value: opt.value,
            method: Method::Numeric,
            coefficients: Some((opt.element.coefficient(first), opt.element.coefficient(second))),
            saturated: (opt.ball_norm - 1.0).abs() <= SATURATION,
            truncation_safe: opt.truncation_safe,
        }
    }
}

//! Named invariant suites, each producing a list of pass/fail checks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distance::{
    ansatz_distance, asymptotic_check, classify, closed_form_value, numeric_supremum, optimal_element, verify_triangle,
    Branch, NumericOptions, StatePair,
};
use crate::error::Result;
use crate::fock::{build_basis, FockIndex};
use crate::spectral::{build_gammas, dirac_operator, verify_phase_space_rep, PhaseSpaceParams};
use crate::tolerances::{
    CLOSED_FORM_EXACT, NUMERIC_VS_CLOSED, PHASE_SPACE_COMMUTATOR, SATURATION, SUPPORT_MARGIN, TRIANGLE_SLACK,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Symmetry, identity of indiscernibles, triangle inequality and ħ-scaling
    /// of the closed form on all states with occupations ≤ 5.
    Metric,
    /// Ball norm of the closed-form two-point elements for occupations ≤ 4.
    Saturation,
    /// Numeric supremum against the closed form for occupations ≤ 3.
    Oracle,
    /// 1D limit, the strict 2D bound and the large-`n` asymptote.
    Asymptotic,
    /// Clifford relations and Hermiticity of the Dirac operator.
    Cliff,
    /// Extended phase-space commutators in the superoperator representation.
    PhaseRep,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Metric, Suite::Saturation, Suite::Oracle, Suite::Asymptotic, Suite::Cliff, Suite::PhaseRep];

    pub const fn name(self) -> &'static str {
        match self {
            Suite::Metric => "metric",
            Suite::Saturation => "saturation",
            Suite::Oracle => "oracle",
            Suite::Asymptotic => "asymptotic",
            Suite::Cliff => "cliff",
            Suite::PhaseRep => "phase_rep",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        write!(f, "unknown suite `{}` (expected one of: {})", self.0, names.join(", "))
    }
}

impl std::error::Error for UnknownSuite {}

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| UnknownSuite(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub hbar: f64,
    /// Cutoff for the Dirac-operator and phase-space checks; distance checks
    /// size their own bases.
    pub cutoff: usize,
    pub numeric: NumericOptions,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { hbar: 1.0, cutoff: 10, numeric: NumericOptions::default() }
    }
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::Metric => metric(config.hbar),
        Suite::Saturation => saturation(config.hbar),
        Suite::Oracle => oracle(config),
        Suite::Asymptotic => asymptotic(config.hbar),
        Suite::Cliff => cliff(config),
        Suite::PhaseRep => phase_rep(config),
    }
}

/// All states with both occupations at most `max`.
pub fn states_up_to(max: usize) -> Vec<FockIndex> {
    (0..=max).flat_map(|n1| (0..=max).map(move |n2| FockIndex::new(n1, n2))).collect()
}

/// Unordered pairs of distinct states with both occupations at most `max`.
pub fn pairs_up_to(max: usize) -> Vec<StatePair> {
    let states = states_up_to(max);
    let mut pairs = Vec::new();
    for (i, &a) in states.iter().enumerate() {
        for &b in &states[i + 1..] {
            pairs.push(StatePair::new(a, b));
        }
    }
    pairs
}

fn metric(hbar: f64) -> Result<Vec<Check>> {
    let states = states_up_to(5);
    let n = states.len();
    let mut d = vec![vec![0.0; n]; n];
    for (i, &a) in states.iter().enumerate() {
        for (j, &b) in states.iter().enumerate() {
            d[i][j] = closed_form_value(StatePair::new(a, b), hbar)?;
        }
    }

    let identity_bad =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| (d[i][j] == 0.0) != (i == j)).count();
    let symmetry_bad = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| d[i][j] != d[j][i]).count();

    let mut triangle_bad = 0;
    let mut min_slack = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let slack = d[i][j] + d[j][k] - d[i][k];
                min_slack = min_slack.min(slack);
                if slack < -TRIANGLE_SLACK {
                    triangle_bad += 1;
                }
            }
        }
    }

    let mut chain_count = 0;
    let mut chain_bad = 0;
    for m in 0..=5 {
        for n2 in 0..=5 {
            for k1 in 0..=5 - m {
                for k2 in 0..=5 - m - k1 {
                    for l1 in 0..=5 - n2 {
                        for l2 in 0..=5 - n2 - l1 {
                            chain_count += 1;
                            if !verify_triangle(m, n2, k1, k2, l1, l2, hbar)?.holds {
                                chain_bad += 1;
                            }
                        }
                    }
                }
            }
        }
    }

    let mut scaling_bad = 0;
    for &a in &states {
        for &b in &states {
            let p = StatePair::new(a, b);
            if closed_form_value(p, 4.0 * hbar)? != 2.0 * closed_form_value(p, hbar)? {
                scaling_bad += 1;
            }
        }
    }

    Ok(vec![
        Check::new("metric/identity", identity_bad == 0, format!("{} ordered pairs, {identity_bad} violations", n * n)),
        Check::new("metric/symmetry", symmetry_bad == 0, format!("{} ordered pairs, {symmetry_bad} violations", n * n)),
        Check::new(
            "metric/triangle",
            triangle_bad == 0,
            format!("{} ordered triples, {triangle_bad} violations, min slack {min_slack:.3e}", n * n * n),
        ),
        Check::new(
            "metric/triangle_chain",
            chain_bad == 0,
            format!("{chain_count} increment chains, {chain_bad} violations"),
        ),
        Check::new(
            "metric/hbar_scaling",
            scaling_bad == 0,
            format!("{} ordered pairs at 4ħ vs ħ, {scaling_bad} not exactly doubled", n * n),
        ),
    ])
}

/// `(count within tolerance, total, min, max)` of dense ball norms.
struct BallStats {
    within: usize,
    total: usize,
    min: (f64, Option<StatePair>),
    max: (f64, Option<StatePair>),
}

impl BallStats {
    fn new() -> Self {
        Self { within: 0, total: 0, min: (f64::INFINITY, None), max: (f64::NEG_INFINITY, None) }
    }

    fn push(&mut self, pair: StatePair, ball: f64) {
        self.total += 1;
        if (ball - 1.0).abs() <= SATURATION {
            self.within += 1;
        }
        if ball < self.min.0 {
            self.min = (ball, Some(pair));
        }
        if ball > self.max.0 {
            self.max = (ball, Some(pair));
        }
    }

    fn check(&self, name: &str) -> Check {
        let show = |(v, p): (f64, Option<StatePair>)| match p {
            Some(p) => format!("{v:.9} at {p}"),
            None => "n/a".to_owned(),
        };
        Check::new(
            name,
            self.within == self.total,
            format!(
                "{}/{} within {SATURATION:e} of 1; min {}, max {}",
                self.within,
                self.total,
                show(self.min),
                show(self.max)
            ),
        )
    }
}

fn saturation(hbar: f64) -> Result<Vec<Check>> {
    let mut adjacent = BallStats::new();
    let mut far = BallStats::new();
    let mut ansatz = BallStats::new();
    for pair in pairs_up_to(4) {
        let basis = build_basis(pair.max_occupation() + SUPPORT_MARGIN)?;
        let ball = optimal_element(pair, hbar, basis)?.ball_norm_dense(hbar)?.value;
        match classify(pair) {
            Branch::Far => far.push(pair, ball),
            _ => adjacent.push(pair, ball),
        }
        let r = ansatz_distance(pair, hbar)?;
        let (c, d) = r.coefficients.expect("ansatz coefficients");
        let e = crate::distance::DiagonalElement::from_states(basis, &[(pair.first, c), (pair.second, d)])?;
        ansatz.push(pair, e.ball_norm_dense(hbar)?.value);
    }
    Ok(vec![
        adjacent.check("saturation/closed_form_adjacent"),
        far.check("saturation/closed_form_far"),
        ansatz.check("saturation/ansatz"),
    ])
}

fn oracle(config: &VerifyConfig) -> Result<Vec<Check>> {
    let hbar = config.hbar;
    let options = config.numeric;
    let cutoff = config.cutoff.max(3 + options.support_pad + SUPPORT_MARGIN);
    let basis = build_basis(cutoff)?;
    let pairs = pairs_up_to(3);
    let mut within = 0;
    let mut worst = (0.0, pairs[0]);
    let mut ball = BallStats::new();
    let mut sandwich_bad = 0;
    for &pair in &pairs {
        let numeric = numeric_supremum(pair, hbar, basis, &options)?;
        let closed = closed_form_value(pair, hbar)?;
        let dev = (numeric.value - closed).abs();
        if dev <= NUMERIC_VS_CLOSED {
            within += 1;
        }
        if dev > worst.0 {
            worst = (dev, pair);
        }
        ball.push(pair, numeric.ball_norm);
        if ansatz_distance(pair, hbar)?.value > numeric.value + 1e-6 {
            sandwich_bad += 1;
        }
    }
    let total = pairs.len();
    Ok(vec![
        Check::new(
            "oracle/numeric_vs_closed_form",
            within == total,
            format!(
                "{within}/{total} pairs within {NUMERIC_VS_CLOSED:e} (pad {}, seed {}); worst deviation {:.6e} at {}",
                options.support_pad, options.seed, worst.0, worst.1
            ),
        ),
        ball.check("oracle/numeric_in_ball"),
        Check::new(
            "oracle/ansatz_below_numeric",
            sandwich_bad == 0,
            format!("{total} pairs, {sandwich_bad} with ansatz > numeric + 1e-6"),
        ),
    ])
}

fn asymptotic(hbar: f64) -> Result<Vec<Check>> {
    let mut worst_1d: f64 = 0.0;
    for m in 0..=20 {
        let d = closed_form_value(StatePair::new(FockIndex::new(m + 1, 0), FockIndex::new(m, 0)), hbar)?;
        worst_1d = worst_1d.max((d - (hbar / 2.0).sqrt() / ((m + 1) as f64).sqrt()).abs());
    }

    let mut bound_bad = 0;
    for m in 0..=20 {
        for n in 1..=20 {
            let d = closed_form_value(StatePair::new(FockIndex::new(m + 1, n), FockIndex::new(m, n)), hbar)?;
            if d >= (hbar / 2.0).sqrt() / ((m + 1) as f64).sqrt() {
                bound_bad += 1;
            }
        }
    }

    let ns = [10, 100, 1000, 10_000];
    let ratios = ns.iter().map(|&n| asymptotic_check(n, hbar).map(|r| r.ratio)).collect::<Result<Vec<_>>>()?;
    let last = ratios[ratios.len() - 1];
    let monotone = ratios.windows(2).all(|w| w[0] < w[1]);
    let shown: Vec<String> = ns.iter().zip(&ratios).map(|(n, r)| format!("{n}: {r:.6}")).collect();

    Ok(vec![
        Check::new(
            "asymptotic/one_dimensional_limit",
            worst_1d <= CLOSED_FORM_EXACT,
            format!("m = 0..20, max |d - sqrt(ħ/2)/sqrt(m+1)| = {worst_1d:.3e}"),
        ),
        Check::new(
            "asymptotic/strict_bound",
            bound_bad == 0,
            format!("m = 0..20, n = 1..20: {bound_bad} pairs at or above the 1D value"),
        ),
        Check::new("asymptotic/ratio_at_1e4", (0.99..=1.0).contains(&last), format!("ratio {last:.8}")),
        Check::new("asymptotic/monotone", monotone, shown.join(", ")),
    ])
}

fn cliff(config: &VerifyConfig) -> Result<Vec<Check>> {
    let gammas = build_gammas();
    let mut checks: Vec<Check> = gammas
        .clifford_deviations()
        .into_iter()
        .map(|((k, l), dev)| {
            Check::new(format!("cliff/anticommutator_{k}{l}"), dev == 0.0, format!("max deviation {dev:e}"))
        })
        .collect();
    for cutoff in 2..=config.cutoff.max(2) {
        let d = dirac_operator(build_basis(cutoff)?, config.hbar)?;
        let dev = d.hermitian_deviation();
        checks.push(Check::new(
            format!("cliff/dirac_hermitian_n{cutoff}"),
            dev == 0.0,
            format!("max |D - D†| = {dev:e}"),
        ));
    }
    Ok(checks)
}

fn phase_rep(config: &VerifyConfig) -> Result<Vec<Check>> {
    let hbar = config.hbar;
    let basis = build_basis(config.cutoff)?;
    let mut checks = Vec::new();
    for (label, theta) in [("mu=nu=hbar", hbar), ("mu=nu=hbar/2", hbar / 2.0)] {
        let params = PhaseSpaceParams::new(hbar, theta, theta)?;
        let report = verify_phase_space_rep(basis, &params)?;
        for c in report.checks {
            checks.push(Check::new(
                format!("phase_rep/{label}/[{},{}]", c.lhs, c.rhs),
                c.max_deviation < PHASE_SPACE_COMMUTATOR,
                format!(
                    "expected {}{:+}i on {} interior units, max deviation {:.3e}",
                    c.expected_re, c.expected_im, report.interior_units, c.max_deviation
                ),
            ));
        }
    }
    Ok(checks)
}

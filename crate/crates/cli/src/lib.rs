//! The `sdk` command line: single distances, distance tables and verification
//! suites, rendered as JSON, CSV or text.
//!
//! Exit codes: 0 when everything passes, 1 for usage or configuration errors,
//! 2 when a verification check or a cross-method comparison fails.

pub mod config;
pub mod report;
pub mod schema;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use spectral_distance::distance::{
    ansatz_distance, closed_form_distance, numeric_supremum, DistanceResult, Method, StatePair,
};
use spectral_distance::fock::{build_basis, FockIndex};
use spectral_distance::tolerances::{ANSATZ_VS_CLOSED, NUMERIC_VS_CLOSED};
use spectral_distance::verify::{run_suite, Check, Suite};

pub use config::{OutputFormat, RunConfig};
pub use report::{Layout, Record, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] spectral_distance::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error("cannot render report: {0}")]
    Render(String),
}

#[derive(Debug, Parser)]
#[command(name = "sdk", version, about = "Spectral distances between two-mode Fock states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two states `n1,n2`.
    Distance {
        #[arg(long, value_name = "N1,N2")]
        a: FockIndex,
        #[arg(long, value_name = "N1,N2")]
        b: FockIndex,
        #[arg(long, value_enum, default_value_t = DistanceMethod::Closed)]
        method: DistanceMethod,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// All pairwise distances among states with `n1 + n2 <= max-level`.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_level: u64,
        #[arg(long, value_enum, default_value_t = TableMethod::Closed)]
        method: TableMethod,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a named verification suite, or `all` of them.
    Verify {
        #[arg(long, value_parser = parse_suites)]
        suite: SuiteSelection,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Fock-space cutoff per mode; raised automatically when too small.
    #[arg(long, default_value_t = 10)]
    pub cutoff: usize,
    /// Quanta added around the pair's bounding box for the numeric supremum.
    #[arg(long, default_value_t = 2)]
    pub pad: usize,
    #[arg(long, env = "SDK_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl CommonArgs {
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            hbar: self.hbar,
            cutoff: self.cutoff,
            support_pad: self.pad,
            seed: self.seed,
            output_format: self.format,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistanceMethod {
    Closed,
    Ansatz,
    Numeric,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableMethod {
    Closed,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSelection(pub Vec<Suite>);

fn parse_suites(s: &str) -> Result<SuiteSelection, String> {
    if s == "all" {
        return Ok(SuiteSelection(Suite::ALL.to_vec()));
    }
    s.parse::<Suite>().map(|suite| SuiteSelection(vec![suite])).map_err(|e| format!("{e}, or `all`"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Usage = 1,
    Failed = 2,
}

/// A finished command: the rendered report plus anything meant for stderr.
#[derive(Debug)]
pub struct Execution {
    pub report: Report,
    pub rendered: String,
    pub warnings: Vec<String>,
    pub out: Option<PathBuf>,
}

impl Execution {
    pub fn status(&self) -> Status {
        if self.report.all_pass() {
            Status::Pass
        } else {
            Status::Failed
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Execution, CliError> {
    let (common, layout) = match &cli.command {
        Command::Distance { common, .. } => (common, Layout::Distance),
        Command::Table { common, .. } => (common, Layout::Table),
        Command::Verify { common, .. } => (common, Layout::Checks),
    };
    let mut config = common.run_config();
    config.validate()?;
    let mut warnings = Vec::new();
    let report = match &cli.command {
        Command::Distance { a, b, method, .. } => {
            warnings.extend(config.ensure_cutoff(a.max_occupation().max(b.max_occupation())));
            cmd_distance(*a, *b, *method, config)?
        }
        Command::Table { max_level, method, .. } => {
            let max_level =
                usize::try_from(*max_level).map_err(|_| CliError::Config("--max-level is too large".into()))?;
            if *method == TableMethod::Numeric {
                warnings.extend(config.ensure_cutoff(max_level));
            }
            cmd_table(max_level, *method, config)?
        }
        Command::Verify { suite, .. } => {
            if suite.0.contains(&Suite::Oracle) {
                warnings.extend(config.ensure_cutoff(3));
            }
            cmd_verify(&suite.0, config)?
        }
    };
    let rendered = report::render(&report, layout)?;
    Ok(Execution { report, rendered, warnings, out: common.out.clone() })
}

/// A pair of identical states is at distance zero under every method; the
/// optimizers reject it, so it is answered here.
fn distance_by(pair: StatePair, method: Method, config: &RunConfig) -> Result<DistanceResult, CliError> {
    if pair.is_diagonal() {
        return Ok(DistanceResult { value: 0.0, method, coefficients: None, saturated: false, truncation_safe: true });
    }
    Ok(match method {
        Method::ClosedForm => closed_form_distance(pair, config.hbar)?,
        Method::Ansatz => ansatz_distance(pair, config.hbar)?,
        Method::Numeric => {
            numeric_supremum(pair, config.hbar, build_basis(config.cutoff)?, &config.numeric_options())?.into()
        }
    })
}

fn tolerance(a: Method, b: Method) -> f64 {
    match (a, b) {
        (Method::ClosedForm, Method::Ansatz) | (Method::Ansatz, Method::ClosedForm) => ANSATZ_VS_CLOSED,
        _ => NUMERIC_VS_CLOSED,
    }
}

pub fn cmd_distance(a: FockIndex, b: FockIndex, method: DistanceMethod, config: RunConfig) -> Result<Report, CliError> {
    let pair = StatePair::new(a, b);
    let methods = match method {
        DistanceMethod::Closed => vec![Method::ClosedForm],
        DistanceMethod::Ansatz => vec![Method::Ansatz],
        DistanceMethod::Numeric => vec![Method::Numeric],
        DistanceMethod::All => vec![Method::ClosedForm, Method::Ansatz, Method::Numeric],
    };
    let results = methods
        .iter()
        .map(|&m| distance_by(pair, m, &config).map(|r| Record::new(pair, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut checks = Vec::new();
    for (i, x) in results.iter().enumerate() {
        for y in &results[i + 1..] {
            let (mx, my) = (x.result.method, y.result.method);
            let tol = tolerance(mx, my);
            let dev = (x.result.value - y.result.value).abs();
            checks.push(Check {
                name: format!("deviation/{mx}-{my}"),
                pass: dev <= tol,
                detail: format!("|{:.10} - {:.10}| = {dev:.3e} (tolerance {tol:e})", x.result.value, y.result.value),
            });
        }
    }
    Ok(Report { config, results, checks })
}

/// States with `n1 + n2 <= max_level`, sorted by `(n1, n2)`.
pub fn states_up_to_level(max_level: usize) -> Vec<FockIndex> {
    (0..=max_level).flat_map(|n1| (0..=max_level - n1).map(move |n2| FockIndex::new(n1, n2))).collect()
}

pub fn cmd_table(max_level: usize, method: TableMethod, config: RunConfig) -> Result<Report, CliError> {
    let states = states_up_to_level(max_level);
    let pairs: Vec<StatePair> = states
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| states[i + 1..].iter().map(move |&b| StatePair::new(a, b)))
        .collect();
    let method = match method {
        TableMethod::Closed => Method::ClosedForm,
        TableMethod::Numeric => Method::Numeric,
    };
    // Per-pair seeds are derived from the configured seed, so the parallel map
    // is deterministic; `collect` keeps the sorted pair order.
    let results = pairs
        .par_iter()
        .map(|&p| distance_by(p, method, &config).map(|r| Record::new(p, r)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report { config, results, checks: Vec::new() })
}

pub fn cmd_verify(suites: &[Suite], config: RunConfig) -> Result<Report, CliError> {
    let verify = config.verify_config();
    let mut checks = Vec::new();
    for &suite in suites {
        checks.extend(run_suite(suite, &verify)?);
    }
    Ok(Report { config, results: Vec::new(), checks })
}

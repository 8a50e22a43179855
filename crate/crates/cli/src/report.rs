use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use spectral_distance::distance::{classify, Branch, DistanceResult, StatePair};
use spectral_distance::fock::FockIndex;
use spectral_distance::verify::Check;

use crate::config::{OutputFormat, RunConfig};
use crate::CliError;

/// One distance, flattened so that CSV and JSON share field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub k: usize,
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub branch: Branch,
    #[serde(flatten)]
    pub result: DistanceResult,
}

impl Record {
    pub fn new(pair: StatePair, result: DistanceResult) -> Self {
        let FockIndex { n1: k, n2: l } = pair.first;
        let FockIndex { n1: m, n2: n } = pair.second;
        Self { k, l, m, n, branch: classify(pair), result }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub results: Vec<Record>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Which columns a CSV or text rendering carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// `k,l,m,n,distance,branch,method`, followed by check lines in text form.
    Distance,
    /// `k,l,m,n,distance,branch`.
    Table,
    /// `name,pass,detail`.
    Checks,
}

pub fn render(report: &Report, layout: Layout) -> Result<String, CliError> {
    match report.config.output_format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Render(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        OutputFormat::Csv => render_csv(report, layout),
        OutputFormat::Text => Ok(render_text(report, layout)),
    }
}

fn render_csv(report: &Report, layout: Layout) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Render(e.to_string());
    match layout {
        Layout::Distance | Layout::Table => {
            let mut header = vec!["k", "l", "m", "n", "distance", "branch"];
            if layout == Layout::Distance {
                header.push("method");
            }
            w.write_record(&header).map_err(fail)?;
            for r in &report.results {
                let mut row = vec![
                    r.k.to_string(),
                    r.l.to_string(),
                    r.m.to_string(),
                    r.n.to_string(),
                    r.result.value.to_string(),
                    r.branch.to_string(),
                ];
                if layout == Layout::Distance {
                    row.push(r.result.method.to_string());
                }
                w.write_record(&row).map_err(fail)?;
            }
        }
        Layout::Checks => {
            w.write_record(["name", "pass", "detail"]).map_err(fail)?;
            for c in &report.checks {
                w.write_record([c.name.as_str(), if c.pass { "true" } else { "false" }, c.detail.as_str()])
                    .map_err(fail)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Render(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Render(e.to_string()))
}

fn render_text(report: &Report, layout: Layout) -> String {
    let mut out = String::new();
    match layout {
        Layout::Distance => {
            for r in &report.results {
                let coefficients = match r.result.coefficients {
                    Some((c, d)) => format!("c = {c:.10}, d = {d:.10}"),
                    None => "no element".to_owned(),
                };
                let _ = writeln!(
                    out,
                    "{:<12} ({},{}) vs ({},{})  d = {:.10}  [{}; {coefficients}; saturated: {}]",
                    r.result.method.to_string(),
                    r.k,
                    r.l,
                    r.m,
                    r.n,
                    r.result.value,
                    r.branch,
                    r.result.saturated
                );
            }
        }
        Layout::Table => {
            let _ = writeln!(out, "{:>4} {:>4} {:>4} {:>4}  {:>14}  branch", "k", "l", "m", "n", "distance");
            for r in &report.results {
                let _ = writeln!(
                    out,
                    "{:>4} {:>4} {:>4} {:>4}  {:>14.10}  {}",
                    r.k, r.l, r.m, r.n, r.result.value, r.branch
                );
            }
        }
        Layout::Checks => {}
    }
    for c in &report.checks {
        let _ = writeln!(out, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if !report.checks.is_empty() {
        let passed = report.checks.iter().filter(|c| c.pass).count();
        let _ = writeln!(out, "{passed}/{} checks passed", report.checks.len());
    }
    out
}

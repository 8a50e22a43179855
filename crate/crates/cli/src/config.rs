use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use spectral_distance::distance::NumericOptions;
use spectral_distance::tolerances::SUPPORT_MARGIN;
use spectral_distance::verify::VerifyConfig;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Settings shared by every subcommand; echoed verbatim in JSON reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub hbar: f64,
    pub cutoff: usize,
    pub support_pad: usize,
    pub seed: u64,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { hbar: 1.0, cutoff: 10, support_pad: 2, seed: 42, output_format: OutputFormat::Text }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(CliError::Config(format!("--hbar must be positive and finite, got {}", self.hbar)));
        }
        if self.cutoff == 0 {
            return Err(CliError::Config("--cutoff must be at least 1".into()));
        }
        Ok(())
    }

    /// Smallest cutoff keeping states up to `max_index`, padded by `support_pad`,
    /// clear of truncation effects.
    pub fn required_cutoff(&self, max_index: usize) -> usize {
        max_index + self.support_pad + SUPPORT_MARGIN
    }

    /// Raises the cutoff to [`Self::required_cutoff`] if needed and returns the
    /// warning to print.
    pub fn ensure_cutoff(&mut self, max_index: usize) -> Option<String> {
        let required = self.required_cutoff(max_index);
        if self.cutoff >= required {
            return None;
        }
        let warning = format!(
            "warning: cutoff {} is below max index {max_index} + pad {} + {SUPPORT_MARGIN}; raised to {required}",
            self.cutoff, self.support_pad
        );
        self.cutoff = required;
        Some(warning)
    }

    pub fn numeric_options(&self) -> NumericOptions {
        NumericOptions { support_pad: self.support_pad, seed: self.seed, ..NumericOptions::default() }
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig { hbar: self.hbar, cutoff: self.cutoff, numeric: self.numeric_options() }
    }
}

//! Experiment configuration: a single flat struct covering every
//! subcommand, loadable from JSON and overridable by command-line flags.
//! Re-running a config with the same seed reproduces outputs byte-for-byte
//! (timing fields aside).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

/// Current config/record schema version.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_words: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_weight: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub retries: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_budget: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    /// Candidate/center scan mode: "exhaustive" or "sampled".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Cap on exhaustive sweeps (centers or candidate errors).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    /// Universal constant for the quadratic list-size floor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator_file: Option<String>,
    /// Generator rows given inline as bit strings.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<String>>,
    /// A received word or error word, as a bit string.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcode_out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code_out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_from: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_to: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_from: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_to: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
    /// `mi` subcommand: run the designated-error definitional-gap demo.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_demo: Option<bool>,
    /// `listdec` subcommand: report parameter formulas instead of checking.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<bool>,
    /// Seed for sampled candidate pools, distinct from the master seed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate_seed: Option<u64>,
    /// Concentration statistics CSV (header plus one row per run).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_out: Option<String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)?;
        if let Some(v) = cfg.schema_version {
            if v > SCHEMA_VERSION {
                return Err(CliError::Config(format!(
                    "config schema version {v} is newer than supported {SCHEMA_VERSION}"
                )));
            }
        }
        Ok(cfg)
    }

    /// Applies `other`'s set fields on top of `self` (flags over file).
    pub fn merged(mut self, other: ExperimentConfig) -> Self {
        macro_rules! take {
            ($($f:ident),* $(,)?) => {
                $(if other.$f.is_some() { self.$f = other.$f; })*
            };
        }
        take!(
            schema_version,
            experiment,
            n,
            num_words,
            rate,
            p,
            gamma,
            delta,
            epsilon,
            error_weight,
            trials,
            seed,
            retries,
            ell,
            radius,
            k_budget,
            samples,
            mode,
            budget,
            constant_c,
            tol,
            max_iter,
            code_file,
            channel_file,
            generator_file,
            rows,
            word,
            error,
            out,
            subcode_out,
            channel_out,
            code_out,
            p_from,
            p_to,
            p_step,
            gamma_from,
            gamma_to,
            gamma_step,
            resolution,
            gap_demo,
            params,
            candidate_seed,
            csv_out,
        );
        self
    }

    pub fn require_n(&self) -> CliResult<u32> {
        let n = self.n.ok_or_else(|| missing("n"))?;
        if !(1..=64).contains(&n) {
            return Err(CliError::Config(format!("n must be in 1..=64, got {n}")));
        }
        Ok(n)
    }

    /// The flip fraction; any value in [0, 1] describes a weight budget.
    pub fn require_p(&self) -> CliResult<f64> {
        let p = self.p.ok_or_else(|| missing("p"))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(CliError::Config(format!("p must lie in [0, 1], got {p}")));
        }
        Ok(p)
    }

    /// The flip fraction restricted to the rate-bound domain [0, 1/2).
    pub fn require_p_below_half(&self) -> CliResult<f64> {
        let p = self.require_p()?;
        if p >= 0.5 {
            return Err(CliError::Config(format!(
                "p must lie in [0, 1/2) for rate experiments, got {p}"
            )));
        }
        Ok(p)
    }

    pub fn require_gamma(&self) -> CliResult<f64> {
        let gamma = self.gamma.ok_or_else(|| missing("gamma"))?;
        if !(0.0..=1.0).contains(&gamma) {
            return Err(CliError::Config(format!(
                "gamma must lie in [0, 1], got {gamma}"
            )));
        }
        Ok(gamma)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// Number of codewords from `num_words`, or floor(2^{rate n}).
    pub fn resolve_num_words(&self, n: u32) -> CliResult<usize> {
        if let Some(nw) = self.num_words {
            if nw < 1 {
                return Err(CliError::Config("num_words must be >= 1".into()));
            }
            return Ok(nw);
        }
        if let Some(rate) = self.rate {
            let raw = f64::floor(f64::exp2(rate * n as f64) + 1e-9);
            if raw < 1.0 {
                return Err(CliError::Config(format!(
                    "rate {rate} yields fewer than one codeword at n={n}"
                )));
            }
            return Ok(raw as usize);
        }
        Err(missing("num_words (or rate)"))
    }
}

fn missing(name: &str) -> CliError {
    CliError::Config(format!("missing required parameter `{name}`"))
}

//! Experiment records: the JSON artifact each subcommand emits.
//!
//! A record always carries both the measured quantity and the bound it is
//! judged against, one [`Verdict`] per named invariant. Field order is fixed
//! by struct declaration and map keys are sorted, so two runs with the same
//! config and seed produce byte-identical files except for `elapsed_ms`.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::SCHEMA_VERSION;
use crate::CliResult;

/// One named check: the observed value against its bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub observed: f64,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema_version: u32,
    pub experiment: String,
    pub prng: String,
    pub config: Value,
    pub stats: Value,
    pub bounds: Value,
    pub verdicts: Vec<Verdict>,
    pub all_pass: bool,
    /// Wall-clock time; the only field excluded from reproducibility.
    pub elapsed_ms: f64,
}

/// Builder tracking verdicts and elapsed time.
pub struct RecordBuilder {
    experiment: String,
    config: Value,
    stats: Value,
    bounds: Value,
    verdicts: Vec<Verdict>,
    started: Instant,
}

impl RecordBuilder {
    pub fn new(experiment: &str, config: &crate::ExperimentConfig) -> CliResult<Self> {
        Ok(RecordBuilder {
            experiment: experiment.to_string(),
            config: serde_json::to_value(config)?,
            stats: Value::Object(Default::default()),
            bounds: Value::Object(Default::default()),
            verdicts: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn stats(&mut self, stats: Value) -> &mut Self {
        self.stats = stats;
        self
    }

    pub fn bounds(&mut self, bounds: Value) -> &mut Self {
        self.bounds = bounds;
        self
    }

    pub fn verdict(&mut self, name: &str, observed: f64, bound: f64, pass: bool) -> &mut Self {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            pass,
            observed,
            bound,
            note: None,
        });
        self
    }

    pub fn verdict_note(
        &mut self,
        name: &str,
        observed: f64,
        bound: f64,
        pass: bool,
        note: &str,
    ) -> &mut Self {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            pass,
            observed,
            bound,
            note: Some(note.to_string()),
        });
        self
    }

    pub fn finish(self) -> ExperimentRecord {
        let all_pass = self.verdicts.iter().all(|v| v.pass);
        ExperimentRecord {
            schema_version: SCHEMA_VERSION,
            experiment: self.experiment,
            prng: oblivch_core::PRNG_ID.to_string(),
            config: self.config,
            stats: self.stats,
            bounds: self.bounds,
            verdicts: self.verdicts,
            all_pass,
            elapsed_ms: self.started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

impl ExperimentRecord {
    pub fn to_json(&self) -> CliResult<String> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }

    pub fn write_to(&self, path: &Path) -> CliResult<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_json()?.as_bytes())?;
        Ok(())
    }

    /// One line per verdict plus a final status line.
    pub fn print_summary(&self) {
        for v in &self.verdicts {
            let status = if v.pass { "PASS" } else { "FAIL" };
            match &v.note {
                Some(note) => println!(
                    "{status} {name}: observed={obs} bound={bound} ({note})",
                    name = v.name,
                    obs = v.observed,
                    bound = v.bound
                ),
                None => println!(
                    "{status} {name}: observed={obs} bound={bound}",
                    name = v.name,
                    obs = v.observed,
                    bound = v.bound
                ),
            }
        }
        println!(
            "{}: {}",
            self.experiment,
            if self.all_pass { "ALL PASS" } else { "FAILED" }
        );
    }
}

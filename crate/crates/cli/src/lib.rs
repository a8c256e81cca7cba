//! Config-driven experiment runner.
//!
//! `run` loads an [`ExperimentConfig`], checks the cost estimate against the
//! budget, runs the experiment on a pool of `workers` threads and writes one
//! or more CSV files plus `<name>.summary.json` into the output directory.
//! Data files depend only on the config and master seed.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::{ConfigError, Diagnostic, Experiment, ExperimentConfig};
pub use output::{Summary, Table};

/// Exit status of a run.
pub mod exit {
    pub const OK: u8 = 0;
    pub const OTHER: u8 = 1;
    pub const INVALID_CONFIG: u8 = 2;
    pub const BUDGET: u8 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => exit::INVALID_CONFIG,
            RunError::Budget(_) => exit::BUDGET,
            RunError::Other(_) => exit::OTHER,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub workers: Option<usize>,
    pub output: Option<PathBuf>,
    pub master_seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub summary: Summary,
}

pub fn validate_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    ExperimentConfig::load(path)
}

fn check_budget(c: &ExperimentConfig) -> Result<(), RunError> {
    let cost = experiments::estimate(c);
    if cost.sites > c.max_sites() {
        return Err(RunError::Budget(format!(
            "one realization reads {} sites, budget.max_sites = {}",
            cost.sites,
            c.max_sites()
        )));
    }
    if cost.work > c.max_work() {
        return Err(RunError::Budget(format!(
            "estimated {} site visits, budget.max_work = {}",
            cost.work,
            c.max_work()
        )));
    }
    Ok(())
}

pub fn run_experiment(
    mut config: ExperimentConfig,
    overrides: &Overrides,
) -> Result<RunReport, RunError> {
    if let Some(s) = overrides.master_seed {
        config.master_seed = Some(s);
    }
    if let Some(w) = overrides.workers {
        if w == 0 {
            return Err(RunError::Config(ConfigError::Invalid(vec![Diagnostic {
                line: None,
                key: "--workers".into(),
                message: "must be at least 1".into(),
            }])));
        }
        config.workers = Some(w);
    }
    check_budget(&config)?;
    let dir = overrides
        .output
        .clone()
        .or_else(|| config.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers())
        .build()
        .map_err(anyhow::Error::from)?;
    let start = Instant::now();
    let outcome = pool.install(|| experiments::run(&config))?;
    let stem = config.stem();
    let mut summary = Summary {
        schema_version: output::SCHEMA_VERSION,
        experiment: config.experiment().name().to_string(),
        name: stem.clone(),
        cli_version: env!("CARGO_PKG_VERSION").to_string(),
        core_version: spinbc::VERSION.to_string(),
        master_seed: config.master_seed(),
        workers: config.workers(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
        config: serde_json::to_value(&config).map_err(anyhow::Error::from)?,
        files: outcome.tables.iter().map(|t| t.file_name(&stem)).collect(),
        results: outcome.results,
        fits: outcome.fits,
    };
    let files = output::write_all(&dir, &stem, &outcome.tables, &summary)?;
    summary.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(RunReport { files, summary })
}

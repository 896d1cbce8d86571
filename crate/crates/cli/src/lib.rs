//! Batch front end of `netmimo`: validated TOML configurations, the figure
//! experiments, CSV/manifest output and the discrepancy report.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod output;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{Config, ConfigError, ExperimentId};
use crate::experiments::{run_experiment, Cache};
use crate::output::{config_hash, sha256_hex, write_csv, write_manifest, Manifest, ManifestEntry};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numerical(#[from] netmimo::Error),
    #[error("csv: {0}")]
    Csv(String),
    #[error("json: {0}")]
    Json(String),
    #[error("{0}")]
    Report(String),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e.to_string())
    }
}

/// Command-line overrides of `run`; they take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub experiment: Option<String>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub trials: Option<usize>,
}

pub fn load_config(path: &Path) -> Result<Config, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(config::validate(&text)?)
}

/// Apply overrides, run the selected experiments and write
/// `<out>/<experiment>.csv` plus `<out>/manifest.json`.
pub fn run(config: &Config, opts: &RunOptions) -> Result<Manifest, CliError> {
    let mut config = config.clone();
    if let Some(s) = opts.seed {
        config.seed = s;
        config.experiments.values_mut().for_each(|e| e.seed = None);
    }
    if let Some(t) = opts.trials {
        config.trials = t;
        config.experiments.values_mut().for_each(|e| e.trials = None);
    }
    if let Some(o) = &opts.out {
        config.out = o.clone();
    }
    let config = config.resolved()?;
    let selected = match &opts.experiment {
        Some(name) => Some(ExperimentId::parse(name).ok_or_else(|| CliError::UnknownExperiment(name.clone()))?),
        None => None,
    };
    let specs: Vec<_> = config
        .experiment_specs()
        .into_iter()
        .filter(|s| selected.is_none_or(|id| id == s.id))
        .collect();
    if specs.is_empty() {
        return Err(CliError::Report("no experiment selected (all skipped?)".into()));
    }
    let out = config.out.clone();
    fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
    let mut cache = Cache::default();
    let mut entries = Vec::new();
    for spec in specs {
        let rows = run_experiment(&config, &spec, &mut cache)?;
        let file = PathBuf::from(format!("{}.csv", spec.id));
        let path = out.join(&file);
        write_csv(&path, &rows)?;
        let bytes = fs::read(&path).map_err(|e| CliError::io(&path, e))?;
        entries.push(ManifestEntry {
            spec,
            file,
            rows: rows.len(),
            sha256: sha256_hex(&bytes),
        });
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: config.seed,
        config_sha256: config_hash(&config),
        config,
        experiments: entries,
    };
    write_manifest(&out, &manifest)?;
    Ok(manifest)
}

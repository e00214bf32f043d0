//! Running configurations and writing their outputs.

use std::env;
use std::fs;
use std::path::PathBuf;

use crate::config::ExperimentConfig;
use crate::error::LabError;
use crate::experiments;
use crate::report::RunReport;

/// Output directory override.
pub const OUT_ENV: &str = "KG_LAB_OUT";
/// Worker-count override for the thread pool.
pub const WORKERS_ENV: &str = "KG_LAB_WORKERS";
pub const DEFAULT_OUT: &str = "lab-out";

/// Size the global pool from `KG_LAB_WORKERS`, if set. Only the first call has an effect.
pub fn init_workers() -> Result<(), LabError> {
    let Ok(v) = env::var(WORKERS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| LabError::Config(format!("{WORKERS_ENV} must be a positive integer, got `{v}`")))?;
    // A pool that already exists keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// The config's own directory, else `KG_LAB_OUT`, else `lab-out`.
pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    cfg.output_dir
        .clone()
        .or_else(|| env::var(OUT_ENV).ok())
        .unwrap_or_else(|| DEFAULT_OUT.to_string())
        .into()
}

/// `<experiment>-<first 12 hex digits of the config hash>`.
pub fn stem(cfg: &ExperimentConfig) -> String {
    format!("{}-{}", cfg.experiment, &cfg.hash()[..12])
}

#[derive(Debug, Clone)]
pub struct Written {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub config: PathBuf,
}

/// Write the report and the config text next to each other.
pub fn write(cfg: &ExperimentConfig, rep: &RunReport) -> Result<Written, LabError> {
    let dir = output_dir(cfg);
    let stem = stem(cfg);
    let (csv, json) = rep.write(&dir, &stem)?;
    let config = dir.join(format!("{stem}.cfg"));
    fs::write(&config, cfg.to_text())?;
    Ok(Written { csv, json, config })
}

pub fn run_and_write(cfg: &ExperimentConfig) -> Result<(RunReport, Written), LabError> {
    let rep = experiments::run(cfg)?;
    let w = write(cfg, &rep)?;
    Ok((rep, w))
}

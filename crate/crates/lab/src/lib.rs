//! Experiment orchestration: configuration, run matrices, reports and the acceptance suite.

pub mod acceptance;
pub mod config;
pub mod error;
pub mod experiments;
pub mod report;
pub mod runner;

pub use config::{ExperimentConfig, ExperimentId, Shape, Thresholds, SCHEMA};
pub use error::LabError;
pub use report::{Check, FitSummary, Row, RunReport, Verdict};

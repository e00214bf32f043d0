//! Run reports: checkpoint rows, fitted exponents with confidence intervals,
//! measured constants, threshold checks and the verdict.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use kg_norms::ols;

use crate::config::ExperimentConfig;
use crate::error::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    ReportOnly,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::ReportOnly => "REPORT",
        }
    }
}

/// Least-squares fit with a 95% Student-t interval on the slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub name: String,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub ci95: Option<(f64, f64)>,
    pub points: usize,
    /// Description of the abscissa range used.
    pub window: String,
}

impl FitSummary {
    /// Fit `y` against `x` as given (callers take logs themselves).
    pub fn new(name: &str, x: &[f64], y: &[f64], window: &str) -> Result<Self, LabError> {
        let fit = ols(x, y).ok_or_else(|| LabError::Fit(format!("{name}: degenerate data")))?;
        let n = x.len();
        let ci95 = (n > 2).then(|| {
            let mx = x.iter().sum::<f64>() / n as f64;
            let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
            let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - fit.intercept - fit.slope * a).powi(2)).sum();
            let se = (ssr / (n - 2) as f64 / sxx).sqrt();
            let q = StudentsT::new(0.0, 1.0, (n - 2) as f64).expect("positive dof").inverse_cdf(0.975);
            (fit.slope - q * se, fit.slope + q * se)
        });
        Ok(FitSummary {
            name: name.to_string(),
            slope: fit.slope,
            intercept: fit.intercept,
            r2: fit.r2,
            ci95,
            points: n,
            window: window.to_string(),
        })
    }

    /// Fit `ln y` against `ln x`.
    pub fn loglog(name: &str, x: &[f64], y: &[f64], window: &str) -> Result<Self, LabError> {
        let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
        Self::new(name, &lx, &ly, window)
    }
}

/// One threshold comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Human-readable condition, e.g. `>= 3.5` or `in [-1.15, -0.85]`.
    pub condition: String,
    pub pass: bool,
}

impl Check {
    pub fn at_least(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, condition: format!(">= {bound:?}"), pass: value >= bound }
    }

    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, condition: format!("<= {bound:?}"), pass: value <= bound }
    }

    pub fn within(name: &str, value: f64, target: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            condition: format!("in [{:?}, {:?}]", target - tol, target + tol),
            pass: (value - target).abs() <= tol,
        }
    }

    pub fn holds(name: &str, ok: bool) -> Self {
        Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, condition: "true".into(), pass: ok }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: String,
    pub config_hash: String,
    pub seed: u64,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub fits: Vec<FitSummary>,
    pub constants: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn new(cfg: &ExperimentConfig, columns: &[&str]) -> Self {
        RunReport {
            experiment: cfg.experiment.to_string(),
            config_hash: cfg.hash(),
            seed: cfg.seed,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            fits: Vec::new(),
            constants: BTreeMap::new(),
            checks: Vec::new(),
            notes: Vec::new(),
            verdict: Verdict::ReportOnly,
        }
    }

    pub fn row(&mut self, label: impl Into<String>, values: Vec<f64>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(Row { label: label.into(), values });
    }

    pub fn constant(&mut self, name: impl Into<String>, v: f64) {
        self.constants.insert(name.into(), v);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Set the verdict from the recorded checks.
    pub fn finish(mut self) -> Self {
        self.verdict = if self.checks.is_empty() {
            Verdict::ReportOnly
        } else if self.checks.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// One-line summary of the checks.
    pub fn summary(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{}={} ({}){}", c.name, fmt_num(c.value), c.condition, if c.pass { "" } else { " FAIL" }))
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn to_csv(&self) -> Result<String, LabError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut head = vec!["label".to_string()];
        head.extend(self.columns.iter().cloned());
        w.write_record(&head)?;
        for r in &self.rows {
            let mut rec = vec![r.label.clone()];
            rec.extend(r.values.iter().map(|v| fmt_num(*v)));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| LabError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Write `<stem>.csv` and `<stem>.json` into `dir`; returns both paths.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf), LabError> {
        fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{stem}.csv"));
        let json_path = dir.join(format!("{stem}.json"));
        fs::write(&csv_path, self.to_csv()?)?;
        fs::write(&json_path, self.to_json()?)?;
        Ok((csv_path, json_path))
    }
}

/// Shortest round-trip form; non-finite values spelled out.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

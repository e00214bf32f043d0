//! The pinned acceptance suite: ten criteria, each a list of configurations whose
//! thresholds encode the criterion's tolerances.

use std::f64::consts::PI;
use std::time::Instant;

use crate::config::{ExperimentConfig, ExperimentId, Shape};
use crate::error::LabError;
use crate::experiments;
use crate::report::{RunReport, Verdict};

#[derive(Debug, Clone)]
pub struct Criterion {
    pub number: u8,
    pub name: &'static str,
    /// Part of `acceptance --fast`.
    pub fast: bool,
    /// Runs whose verdicts decide the criterion; report-only runs ride along.
    pub configs: Vec<ExperimentConfig>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub number: u8,
    pub name: &'static str,
    pub pass: bool,
    pub seconds: f64,
    pub reports: Vec<RunReport>,
}

impl Outcome {
    /// `criterion N name: PASS (12.3s) check=value (condition); ...`
    pub fn line(&self) -> String {
        let detail: Vec<String> = self
            .reports
            .iter()
            .map(|r| {
                let s = r.summary();
                format!("[{}] {}", r.experiment, if s.is_empty() { "report-only".to_string() } else { s })
            })
            .collect();
        format!(
            "criterion {} {}: {} ({:.1}s) {}",
            self.number,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.seconds,
            detail.join(" ")
        )
    }
}

fn cfg(id: ExperimentId, edit: impl FnOnce(&mut ExperimentConfig)) -> ExperimentConfig {
    let mut c = ExperimentConfig::base(id);
    edit(&mut c);
    c
}

fn linear(id: ExperimentId, dim: usize) -> ExperimentConfig {
    cfg(id, |c| {
        c.dim = dim;
        c.n = 256;
        c.half_len = 64.0 * PI;
        c.width = 1.0;
        c.bands = (0, 3);
        c.shape = Shape::Gaussian;
    })
}

fn oracle() -> Criterion {
    Criterion {
        number: 1,
        name: "oracle-equivalence",
        fast: true,
        configs: vec![cfg(ExperimentId::ParadiffOracle, |c| c.thresholds.rel_tol = Some(1e-10))],
    }
}

fn identities() -> Criterion {
    Criterion {
        number: 2,
        name: "operator-identities",
        fast: true,
        configs: vec![cfg(ExperimentId::OperatorIdentities, |c| {
            c.thresholds.rel_tol = Some(1e-10);
            c.thresholds.identity_tol = Some(1e-14);
        })],
    }
}

fn decay() -> Criterion {
    let two = cfg(ExperimentId::DispersiveDecay, |c| {
        *c = linear(ExperimentId::DispersiveDecay, 2);
        c.window = (2.0, 16.0);
        c.per_decade = 20;
        c.thresholds.target = Some(-1.0);
        c.thresholds.tolerance = Some(0.15);
    });
    let mut one = two.clone();
    one.dim = 1;
    one.thresholds.target = Some(-0.5);
    Criterion { number: 3, name: "dispersive-decay", fast: false, configs: vec![two, one] }
}

fn strichartz() -> Criterion {
    let two = cfg(ExperimentId::StrichartzGrowth, |c| {
        *c = linear(ExperimentId::StrichartzGrowth, 2);
        c.window = (2.0, f64::INFINITY);
        c.per_decade = 200;
        c.thresholds.min_r2 = Some(0.95);
    });
    let mut one = two.clone();
    one.dim = 1;
    one.thresholds.min_r2 = None;
    one.thresholds.target = Some(0.5);
    one.thresholds.tolerance = Some(0.15);
    Criterion { number: 4, name: "strichartz-growth", fast: false, configs: vec![two, one] }
}

fn phase() -> Criterion {
    Criterion {
        number: 5,
        name: "phase-scan",
        fast: true,
        configs: vec![cfg(ExperimentId::PhaseScan, |c| {
            c.dims = vec![1, 2, 3];
            c.radius = 8.0;
            c.step = 0.25;
            c.thresholds.stability = Some(0.25);
        })],
    }
}

fn good_unknown() -> Criterion {
    Criterion {
        number: 6,
        name: "good-unknown",
        fast: true,
        configs: vec![cfg(ExperimentId::GoodUnknownScaling, |c| {
            c.shape = Shape::BandMean;
            c.eps = vec![0.05, 0.025, 0.0125];
            c.thresholds.target = Some(2.0);
            c.thresholds.tolerance = Some(0.1);
            c.thresholds.q_limit = Some(0.5);
        })],
    }
}

fn residual() -> Criterion {
    Criterion {
        number: 7,
        name: "reduced-residual",
        fast: false,
        configs: vec![cfg(ExperimentId::ReducedResidual, |c| {
            c.shape = Shape::BandMean;
            c.regularity = 4.0;
            c.eps = vec![0.8, 0.4, 0.2];
            c.h0 = 0.02;
            c.levels = 13;
            c.thresholds.min_ratio = Some(3.5);
            c.thresholds.min_exponent = Some(3.5);
        })],
    }
}

fn normal_form() -> Criterion {
    Criterion {
        number: 8,
        name: "normal-form",
        fast: false,
        configs: vec![cfg(ExperimentId::NormalForm, |c| {
            c.eps = vec![0.05, 0.025, 0.0125];
            c.t_end = 5.0;
            c.dt = 0.005;
            c.every = 20;
            c.thresholds.target = Some(2.0);
            c.thresholds.tolerance = Some(0.1);
            c.thresholds.cubic_target = Some(3.0);
            c.thresholds.cubic_tolerance = Some(0.15);
            c.thresholds.min_exponent = Some(3.0);
        })],
    }
}

/// Strong-coefficient instance that blows up within reach of a desk run.
fn lifespan_config(n: usize) -> ExperimentConfig {
    cfg(ExperimentId::LifespanSweep, |c| {
        c.n = n;
        c.alpha = 40.0;
        c.beta = 0.0;
        c.gamma1 = 0.0;
        c.gamma2 = 40.0;
        c.shape = Shape::BandMean;
        c.eps = vec![0.4, 0.3, 0.2];
        c.dt = 0.02;
        c.t_end = 20000.0;
    })
}

fn lifespan() -> Criterion {
    let mut pinned = lifespan_config(64);
    pinned.thresholds.min_exponent = Some(2.0);
    // Same sweep at twice the resolution, reported alongside.
    let finer = lifespan_config(128);
    Criterion { number: 9, name: "lifespan", fast: false, configs: vec![pinned, finer] }
}

fn bootstrap() -> Criterion {
    let run = cfg(ExperimentId::WeightedBootstrap, |c| {
        c.dim = 2;
        c.n = 256;
        c.half_len = 64.0 * PI;
        c.regularity = ExperimentConfig::default_regularity(2);
        c.shape = Shape::Localized;
        c.width = 2.0;
        c.eps = vec![0.01];
        c.dt = 0.05;
        c.t_end = 16.0 * PI;
        c.weight = 0.18;
        c.per_decade = 20;
        c.thresholds.max_growth = Some(2.0);
    });
    Criterion { number: 10, name: "bootstrap-scattering", fast: false, configs: vec![run] }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        oracle(),
        identities(),
        decay(),
        strichartz(),
        phase(),
        good_unknown(),
        residual(),
        normal_form(),
        lifespan(),
        bootstrap(),
    ]
}

/// Run every configuration of `c`; it passes when each decisive run passes.
pub fn evaluate(c: &Criterion) -> Result<Outcome, LabError> {
    let start = Instant::now();
    let reports = c.configs.iter().map(experiments::run).collect::<Result<Vec<_>, _>>()?;
    let decisive: Vec<&RunReport> = reports.iter().filter(|r| r.verdict != Verdict::ReportOnly).collect();
    let pass = !decisive.is_empty() && decisive.iter().all(|r| r.verdict == Verdict::Pass);
    Ok(Outcome { number: c.number, name: c.name, pass, seconds: start.elapsed().as_secs_f64(), reports })
}

//! Versioned `key = value` experiment configuration.
//!
//! One setting per line, `#` starts a comment, lists are comma separated and a
//! trailing `pi` multiplies a number by π (`half_len = 64pi`). `schema` must be
//! the first key. Unknown or repeated keys are errors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use kg_dynamics::{cfl_limit, DataShape, NonlinearitySpec};
use kg_resonance::SignPair;
use kg_spectral::Grid;

use crate::error::LabError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentId {
    DispersiveDecay,
    StrichartzGrowth,
    PhaseScan,
    MultiplierBounds,
    ParadiffOracle,
    OperatorIdentities,
    GoodUnknownScaling,
    ReducedResidual,
    NormalForm,
    LifespanSweep,
    WeightedBootstrap,
    Scattering,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 12] = [
        ExperimentId::DispersiveDecay,
        ExperimentId::StrichartzGrowth,
        ExperimentId::PhaseScan,
        ExperimentId::MultiplierBounds,
        ExperimentId::ParadiffOracle,
        ExperimentId::OperatorIdentities,
        ExperimentId::GoodUnknownScaling,
        ExperimentId::ReducedResidual,
        ExperimentId::NormalForm,
        ExperimentId::LifespanSweep,
        ExperimentId::WeightedBootstrap,
        ExperimentId::Scattering,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentId::DispersiveDecay => "dispersive-decay",
            ExperimentId::StrichartzGrowth => "strichartz-growth",
            ExperimentId::PhaseScan => "phase-scan",
            ExperimentId::MultiplierBounds => "multiplier-bounds",
            ExperimentId::ParadiffOracle => "paradiff-oracle",
            ExperimentId::OperatorIdentities => "operator-identities",
            ExperimentId::GoodUnknownScaling => "good-unknown-scaling",
            ExperimentId::ReducedResidual => "reduced-residual",
            ExperimentId::NormalForm => "normal-form",
            ExperimentId::LifespanSweep => "lifespan-sweep",
            ExperimentId::WeightedBootstrap => "weighted-bootstrap",
            ExperimentId::Scattering => "scattering",
        }
    }

    /// Experiments that integrate the nonlinear equation.
    pub fn is_dynamic(self) -> bool {
        matches!(
            self,
            ExperimentId::ReducedResidual
                | ExperimentId::NormalForm
                | ExperimentId::LifespanSweep
                | ExperimentId::WeightedBootstrap
                | ExperimentId::Scattering
        )
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentId {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self, LabError> {
        ExperimentId::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| LabError::Config(format!("unknown experiment `{s}`")))
    }
}

/// Initial-data family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// Random band-limited coefficients on `|ξ| ≤ radius`, zero mode removed.
    Band,
    /// The same with the zero mode kept.
    BandMean,
    /// Gaussian envelope of width `width`.
    Localized,
    /// Deterministic Gaussian `exp(-|x|²/2width²)` (linear experiments).
    Gaussian,
}

impl Shape {
    fn parse(s: &str) -> Result<Shape, LabError> {
        match s {
            "band" => Ok(Shape::Band),
            "band-mean" => Ok(Shape::BandMean),
            "localized" => Ok(Shape::Localized),
            "gaussian" => Ok(Shape::Gaussian),
            _ => Err(LabError::Config(format!("unknown shape `{s}`"))),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Shape::Band => "band",
            Shape::BandMean => "band-mean",
            Shape::Localized => "localized",
            Shape::Gaussian => "gaussian",
        }
    }
}

/// Pass/fail thresholds. Verdicts are computed from these alone; absent ones are not checked.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Expected fitted exponent.
    pub target: Option<f64>,
    /// Half-width of the band around `target`.
    pub tolerance: Option<f64>,
    /// Lower bound on a fitted exponent.
    pub min_exponent: Option<f64>,
    /// Lower bound on a refinement ratio.
    pub min_ratio: Option<f64>,
    /// Upper bound on growth relative to the initial value.
    pub max_growth: Option<f64>,
    /// Relative tolerance of oracle or identity checks.
    pub rel_tol: Option<f64>,
    /// Lower bound on a fit's R².
    pub min_r2: Option<f64>,
    /// Relative drift allowed under refinement.
    pub stability: Option<f64>,
    /// Upper bound on `|q|`.
    pub q_limit: Option<f64>,
    /// Expected exponent of the cubic-order quantity, where a run fits two.
    pub cubic_target: Option<f64>,
    pub cubic_tolerance: Option<f64>,
    /// Absolute bound for identities that hold exactly.
    pub identity_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub experiment: ExperimentId,
    pub dim: usize,
    pub n: usize,
    pub half_len: f64,
    /// Nonlinearity: `Q^{0j} = alpha·u`, `Q^{jl} = beta·u·δ_{jl}`, `S = gamma1·u² + gamma2·(∂_t u)²`.
    pub alpha: f64,
    pub beta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub eps: Vec<f64>,
    pub dt: f64,
    pub t_end: f64,
    pub seed: u64,
    /// Sobolev index `N` of the monitored norms.
    pub regularity: f64,
    pub shape: Shape,
    /// Band radius, or phase-scan radius.
    pub radius: f64,
    /// Gaussian or localized width.
    pub width: f64,
    /// Lowest and highest Littlewood-Paley band of the linear datum.
    pub bands: (i32, i32),
    pub signs: Vec<String>,
    /// Scan lattice step.
    pub step: f64,
    /// Dimensions covered by the phase scan.
    pub dims: Vec<usize>,
    /// Weight exponent of `⟨x⟩^α` norms.
    pub weight: f64,
    /// Refinement levels (residual) or oracle grids (`n` values, paradiff).
    pub levels: usize,
    /// Initial spacing of the residual refinement.
    pub h0: f64,
    /// Solver steps between quadrature nodes (normal form).
    pub every: usize,
    /// Fit window in `t`.
    pub window: (f64, f64),
    /// Checkpoints per decade of `t`.
    pub per_decade: usize,
    pub thresholds: Thresholds,
    #[serde(skip)]
    pub output_dir: Option<String>,
}

impl ExperimentConfig {
    /// Neutral starting point: every field set, no thresholds.
    pub fn base(experiment: ExperimentId) -> Self {
        ExperimentConfig {
            schema: SCHEMA,
            experiment,
            dim: 1,
            n: 64,
            half_len: 8.0 * std::f64::consts::PI,
            alpha: 1.0,
            beta: 1.0,
            gamma1: 1.0,
            gamma2: 1.0,
            eps: vec![0.05, 0.025, 0.0125],
            dt: 0.01,
            t_end: 10.0,
            seed: 1,
            regularity: 8.0,
            shape: Shape::Band,
            radius: 1.0,
            width: 2.0,
            bands: (0, 3),
            signs: SignPair::ALL.iter().map(|s| s.label()).collect(),
            step: 0.25,
            dims: vec![1, 2, 3],
            weight: 0.18,
            levels: 4,
            h0: 0.02,
            every: 20,
            window: (2.0, f64::INFINITY),
            per_decade: 10,
            thresholds: Thresholds::default(),
            output_dir: None,
        }
    }

    /// `N = 2d + ⌊d/2⌋ + 6`.
    pub fn default_regularity(dim: usize) -> f64 {
        (2 * dim + dim / 2 + 6) as f64
    }

    pub fn spec(&self) -> NonlinearitySpec {
        let mut spec = NonlinearitySpec::standard(self.dim, self.alpha, self.beta, self.gamma1, self.gamma2);
        spec.s.retain(|t| t.2 != 0.0);
        spec
    }

    pub fn data_shape(&self) -> DataShape {
        match self.shape {
            Shape::Band => DataShape::Band { radius: self.radius, with_mean: false },
            Shape::BandMean => DataShape::Band { radius: self.radius, with_mean: true },
            Shape::Localized | Shape::Gaussian => DataShape::Localized { width: self.width },
        }
    }

    pub fn sign_pairs(&self) -> Result<Vec<SignPair>, LabError> {
        self.signs
            .iter()
            .map(|s| SignPair::parse(s).ok_or_else(|| LabError::Config(format!("bad sign pair `{s}`"))))
            .collect()
    }

    /// SHA-256 of the canonical JSON form; the output directory is not part of it.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// Check every field against the preconditions of the module that consumes it.
    pub fn validate(&self) -> Result<(), LabError> {
        let bad = |m: String| Err(LabError::Config(m));
        if self.schema != SCHEMA {
            return bad(format!("schema {} is not supported (expected {SCHEMA})", self.schema));
        }
        let grid = Grid::<f64>::new(self.dim, self.n, self.half_len)
            .map_err(|e| LabError::Config(format!("grid: {e}")))?;
        if self.eps.is_empty() {
            return bad("eps list is empty".into());
        }
        if let Some(e) = self.eps.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return bad(format!("eps entries must be positive, got {e}"));
        }
        if !(self.regularity >= 0.0) {
            return bad(format!("regularity must be nonnegative, got {}", self.regularity));
        }
        if !(self.window.0 < self.window.1) {
            return bad("fit window must satisfy lo < hi".into());
        }
        if !(0.0 < self.weight && self.weight < 1.0) {
            return bad(format!("weight must lie in (0,1), got {}", self.weight));
        }
        if self.bands.0 > self.bands.1 || self.bands.1 < -1 {
            return bad(format!("bad band interval {:?}", self.bands));
        }
        if !(self.radius > 0.0 && self.width > 0.0 && self.step > 0.0) {
            return bad("radius, width and step must be positive".into());
        }
        if self.per_decade == 0 {
            return bad("per_decade must be positive".into());
        }
        self.sign_pairs()?;
        if let Some(d) = self.dims.iter().find(|d| !(1..=3).contains(*d)) {
            return bad(format!("scan dimension {d} outside 1..=3"));
        }
        if let (Some(_), None) | (None, Some(_)) = (self.thresholds.target, self.thresholds.tolerance) {
            return bad("target and tolerance must be given together".into());
        }
        if let (Some(_), None) | (None, Some(_)) = (self.thresholds.cubic_target, self.thresholds.cubic_tolerance) {
            return bad("cubic_target and cubic_tolerance must be given together".into());
        }
        if self.experiment.is_dynamic() || self.experiment == ExperimentId::GoodUnknownScaling {
            self.spec().validate().map_err(|e| LabError::Config(format!("spec: {e}")))?;
        }
        if self.experiment.is_dynamic() {
            let limit = cfl_limit(&grid);
            if !(self.dt > 0.0 && self.dt <= limit) {
                return bad(format!("dt = {} violates the CFL guard {limit}", self.dt));
            }
            if !(self.t_end > kg_dynamics::T0) {
                return bad(format!("t_end must exceed the initial time {}", kg_dynamics::T0));
            }
        }
        if self.experiment == ExperimentId::ReducedResidual {
            if self.levels < 2 {
                return bad("reduced-residual needs at least two levels".into());
            }
            if !(self.h0 > 0.0 && self.h0 <= cfl_limit(&grid)) {
                return bad(format!("h0 = {} violates the CFL guard", self.h0));
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, LabError> {
        let mut lines = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| LabError::Config(format!("line {}: expected `key = value`", no + 1)))?;
            lines.push((no + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let mut it = lines.into_iter();
        match it.next() {
            Some((_, k, v)) if k == "schema" => {
                let s: u32 = v.parse().map_err(|_| LabError::Config(format!("bad schema `{v}`")))?;
                if s != SCHEMA {
                    return Err(LabError::Config(format!("schema {s} is not supported (expected {SCHEMA})")));
                }
            }
            _ => return Err(LabError::Config("the first key must be `schema`".into())),
        }
        let rest: Vec<_> = it.collect();
        let exp = rest
            .iter()
            .find(|(_, k, _)| k == "experiment")
            .ok_or_else(|| LabError::Config("missing `experiment`".into()))?;
        let mut cfg = ExperimentConfig::base(exp.2.parse()?);
        let mut seen = std::collections::HashSet::new();
        for (no, k, v) in rest {
            if !seen.insert(k.clone()) {
                return Err(LabError::Config(format!("line {no}: repeated key `{k}`")));
            }
            cfg.set(&k, &v).map_err(|e| LabError::Config(format!("line {no}: {e}")))?;
        }
        Ok(cfg)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        let th = &mut self.thresholds;
        match key {
            "experiment" => {}
            "dim" => self.dim = int(v)?,
            "n" => self.n = int(v)?,
            "half_len" => self.half_len = num(v)?,
            "alpha" => self.alpha = num(v)?,
            "beta" => self.beta = num(v)?,
            "gamma1" => self.gamma1 = num(v)?,
            "gamma2" => self.gamma2 = num(v)?,
            "eps" => self.eps = list(v, num)?,
            "dt" => self.dt = num(v)?,
            "t_end" => self.t_end = num(v)?,
            "seed" => self.seed = v.parse().map_err(|_| format!("bad seed `{v}`"))?,
            "regularity" => self.regularity = num(v)?,
            "shape" => self.shape = Shape::parse(v).map_err(|e| e.to_string())?,
            "radius" => self.radius = num(v)?,
            "width" => self.width = num(v)?,
            "bands" => self.bands = pair(v, |s| s.parse::<i32>().map_err(|_| format!("bad band `{s}`")))?,
            "signs" => self.signs = list(v, |s| Ok(s.to_string()))?,
            "step" => self.step = num(v)?,
            "dims" => self.dims = list(v, int)?,
            "weight" => self.weight = num(v)?,
            "levels" => self.levels = int(v)?,
            "h0" => self.h0 = num(v)?,
            "every" => self.every = int(v)?,
            "window" => self.window = pair(v, num)?,
            "per_decade" => self.per_decade = int(v)?,
            "target" => th.target = Some(num(v)?),
            "tolerance" => th.tolerance = Some(num(v)?),
            "min_exponent" => th.min_exponent = Some(num(v)?),
            "min_ratio" => th.min_ratio = Some(num(v)?),
            "max_growth" => th.max_growth = Some(num(v)?),
            "rel_tol" => th.rel_tol = Some(num(v)?),
            "min_r2" => th.min_r2 = Some(num(v)?),
            "stability" => th.stability = Some(num(v)?),
            "q_limit" => th.q_limit = Some(num(v)?),
            "cubic_target" => th.cubic_target = Some(num(v)?),
            "cubic_tolerance" => th.cubic_tolerance = Some(num(v)?),
            "identity_tol" => th.identity_tol = Some(num(v)?),
            "output_dir" => self.output_dir = Some(v.to_string()),
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    /// The text form `parse` reads back.
    pub fn to_text(&self) -> String {
        let f = |x: f64| format!("{x:?}");
        let join = |v: Vec<String>| v.join(", ");
        let mut out = vec![
            format!("schema = {}", self.schema),
            format!("experiment = {}", self.experiment),
            format!("dim = {}", self.dim),
            format!("n = {}", self.n),
            format!("half_len = {}", f(self.half_len)),
            format!("alpha = {}", f(self.alpha)),
            format!("beta = {}", f(self.beta)),
            format!("gamma1 = {}", f(self.gamma1)),
            format!("gamma2 = {}", f(self.gamma2)),
            format!("eps = {}", join(self.eps.iter().map(|e| f(*e)).collect())),
            format!("dt = {}", f(self.dt)),
            format!("t_end = {}", f(self.t_end)),
            format!("seed = {}", self.seed),
            format!("regularity = {}", f(self.regularity)),
            format!("shape = {}", self.shape.name()),
            format!("radius = {}", f(self.radius)),
            format!("width = {}", f(self.width)),
            format!("bands = {}, {}", self.bands.0, self.bands.1),
            format!("signs = {}", self.signs.join(", ")),
            format!("step = {}", f(self.step)),
            format!("dims = {}", join(self.dims.iter().map(|d| d.to_string()).collect())),
            format!("weight = {}", f(self.weight)),
            format!("levels = {}", self.levels),
            format!("h0 = {}", f(self.h0)),
            format!("every = {}", self.every),
            format!("window = {}, {}", f(self.window.0), f(self.window.1)),
            format!("per_decade = {}", self.per_decade),
        ];
        let th = &self.thresholds;
        for (k, v) in [
            ("target", th.target),
            ("tolerance", th.tolerance),
            ("min_exponent", th.min_exponent),
            ("min_ratio", th.min_ratio),
            ("max_growth", th.max_growth),
            ("rel_tol", th.rel_tol),
            ("min_r2", th.min_r2),
            ("stability", th.stability),
            ("q_limit", th.q_limit),
            ("cubic_target", th.cubic_target),
            ("cubic_tolerance", th.cubic_tolerance),
            ("identity_tol", th.identity_tol),
        ] {
            if let Some(v) = v {
                out.push(format!("{k} = {}", f(v)));
            }
        }
        if let Some(d) = &self.output_dir {
            out.push(format!("output_dir = {d}"));
        }
        out.join("\n") + "\n"
    }
}

fn num(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (body, scale) = match s.strip_suffix("pi") {
        Some(b) => (b.trim(), std::f64::consts::PI),
        None => (s, 1.0),
    };
    let v: f64 = match body {
        "" => 1.0,
        "inf" => f64::INFINITY,
        _ => body.parse().map_err(|_| format!("bad number `{s}`"))?,
    };
    Ok(v * scale)
}

fn int(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("bad integer `{s}`"))
}

fn list<X>(s: &str, f: impl Fn(&str) -> Result<X, String>) -> Result<Vec<X>, String> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(f).collect()
}

fn pair<X>(s: &str, f: impl Fn(&str) -> Result<X, String>) -> Result<(X, X), String> {
    let mut v = list(s, f)?;
    if v.len() != 2 {
        return Err(format!("expected two values, got `{s}`"));
    }
    let b = v.pop().expect("two");
    let a = v.pop().expect("two");
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_text() {
        let mut c = ExperimentConfig::base(ExperimentId::LifespanSweep);
        c.eps = vec![0.4, 0.3, 0.2];
        c.thresholds.min_exponent = Some(2.0);
        c.half_len = 8.0 * std::f64::consts::PI;
        let back = ExperimentConfig::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
    }

    #[test]
    fn pi_suffix_and_comments() {
        let c = ExperimentConfig::parse("schema = 1\nexperiment = dispersive-decay # linear\nhalf_len = 64pi\n").unwrap();
        assert_eq!(c.half_len, 64.0 * std::f64::consts::PI);
    }

    #[test]
    fn unknown_and_repeated_keys_rejected() {
        assert!(ExperimentConfig::parse("schema = 1\nexperiment = scattering\ncolour = red\n").is_err());
        assert!(ExperimentConfig::parse("schema = 1\nexperiment = scattering\nn = 8\nn = 16\n").is_err());
        assert!(ExperimentConfig::parse("experiment = scattering\nschema = 1\n").is_err());
        assert!(ExperimentConfig::parse("schema = 2\nexperiment = scattering\n").is_err());
    }

    #[test]
    fn empty_eps_fails_validation() {
        let c = ExperimentConfig::parse("schema = 1\nexperiment = lifespan-sweep\neps =\n").unwrap();
        assert!(matches!(c.validate(), Err(LabError::Config(m)) if m.contains("eps")));
    }

    #[test]
    fn grid_and_cfl_checked() {
        let mut c = ExperimentConfig::base(ExperimentId::LifespanSweep);
        c.n = 63;
        assert!(c.validate().is_err());
        c.n = 64;
        c.dt = 1.0;
        assert!(c.validate().is_err());
        c.dt = 0.02;
        c.validate().unwrap();
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = ExperimentConfig::base(ExperimentId::PhaseScan);
        let mut b = a.clone();
        b.output_dir = Some("/tmp/x".into());
        assert_eq!(a.hash(), b.hash());
        b.seed = 2;
        assert_ne!(a.hash(), b.hash());
    }
}

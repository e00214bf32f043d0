//! Experiments on the nonlinear flow: good unknown, reduced residual, normal form,
//! lifespans, and the weighted bootstrap with its scattering diagnostics.

use rayon::prelude::*;

use kg_dynamics::{
    duhamel_check, good_unknown_report, initial_data, refinement_study, run_to_time, scattering_limit, CubicRoute,
    DuhamelConfig, KGState, Kernels, Monitor, Quadrature, RunConfig,
};
use kg_norms::{sandwich_constants, NormSpec};
use kg_spectral::make_grid;

use crate::config::ExperimentConfig;
use crate::error::LabError;
use crate::report::{Check, FitSummary, RunReport};

/// Halvings count as pre-floor while the finer residual exceeds this multiple of the floor.
pub const FLOOR_MARGIN: f64 = 10.0;

fn initial(cfg: &ExperimentConfig, eps: f64) -> Result<KGState<f64>, LabError> {
    let g = make_grid(cfg.dim, cfg.n, cfg.half_len)?;
    Ok(initial_data(&g, cfg.data_shape(), cfg.regularity, eps, cfg.seed))
}

fn eps_window(cfg: &ExperimentConfig) -> String {
    let lo = cfg.eps.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = cfg.eps.iter().copied().fold(0.0, f64::max);
    format!("eps in [{lo}, {hi}]")
}

fn exponent_checks(rep: &mut RunReport, cfg: &ExperimentConfig, fit: &FitSummary) {
    if let (Some(target), Some(tol)) = (cfg.thresholds.target, cfg.thresholds.tolerance) {
        rep.check(Check::within(&fit.name, fit.slope, target, tol));
    }
}

/// `‖P_{≥0}(𝒰 - U)‖_{H^N}` against `ε`.
pub fn good_unknown_scaling(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let spec = cfg.spec();
    let mut rep = RunReport::new(cfg, &["eps", "diff_hn", "w3inf", "hn", "ratio", "q_sup"]);
    let reports = cfg
        .eps
        .par_iter()
        .map(|&e| Ok(good_unknown_report(&initial(cfg, e)?, &spec, cfg.regularity)?))
        .collect::<Result<Vec<_>, LabError>>()?;
    for (e, r) in cfg.eps.iter().zip(&reports) {
        rep.row(format!("eps={e}"), vec![*e, r.diff_hn, r.w3inf, r.hn, r.ratio, r.q_sup]);
    }
    let diffs: Vec<f64> = reports.iter().map(|r| r.diff_hn).collect();
    let fit = FitSummary::loglog("difference_exponent", &cfg.eps, &diffs, &eps_window(cfg))?;
    exponent_checks(&mut rep, cfg, &fit);
    let q = reports.iter().map(|r| r.q_sup).fold(0.0, f64::max);
    rep.constant("q_sup", q);
    if let Some(lim) = cfg.thresholds.q_limit {
        rep.check(Check::at_most("q_sup", q, lim));
    }
    rep.fits.push(fit);
    Ok(rep.finish())
}

/// Reduced-equation residual under step halving, per `ε`, and the `ε`-scaling of its floor.
pub fn reduced_residual(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let spec = cfg.spec();
    let mut rep = RunReport::new(cfg, &["eps", "h", "residual", "extrapolated"]);
    let studies = cfg
        .eps
        .par_iter()
        .map(|&e| Ok(refinement_study(&initial(cfg, e)?, &spec, cfg.h0, cfg.levels)?))
        .collect::<Result<Vec<_>, LabError>>()?;
    let mut worst_ratio = f64::INFINITY;
    let mut q: f64 = 0.0;
    let mut floors = Vec::new();
    for (e, s) in cfg.eps.iter().zip(&studies) {
        for (k, (h, r)) in s.spacings.iter().zip(&s.residuals).enumerate() {
            let x = s.extrapolated.get(k).copied().unwrap_or(f64::NAN);
            rep.row(format!("eps={e} level={k}"), vec![*e, *h, *r, x]);
        }
        let pre = s.pre_floor_ratios(FLOOR_MARGIN);
        if pre.is_empty() {
            rep.note(format!("eps={e}: no halving sits above {FLOOR_MARGIN}x the floor"));
        }
        worst_ratio = pre.iter().copied().fold(worst_ratio, f64::min);
        rep.constant(format!("floor_eps={e}"), s.floor());
        rep.constant(format!("pre_floor_halvings_eps={e}"), pre.len() as f64);
        floors.push(s.floor());
        q = q.max(s.q_sup);
    }
    let fit = FitSummary::loglog("floor_exponent", &cfg.eps, &floors, &eps_window(cfg))?;
    if let Some(r) = cfg.thresholds.min_ratio {
        rep.check(Check::at_least("pre_floor_ratio", worst_ratio, r));
    }
    if let Some(m) = cfg.thresholds.min_exponent {
        rep.check(Check::at_least("floor_exponent", fit.slope, m));
    }
    if let Some(lim) = cfg.thresholds.q_limit {
        rep.check(Check::at_most("q_sup", q, lim));
    }
    rep.constant("q_sup", q);
    rep.fits.push(fit);
    Ok(rep.finish())
}

/// Both sides of the profile identity on `[1, t_end]`.
pub fn normal_form(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let spec = cfg.spec();
    let kernels = Kernels::derive(&spec)?;
    let dc = DuhamelConfig {
        t_end: cfg.t_end,
        dt: cfg.dt,
        every: cfg.every,
        quadrature: Quadrature::Trapezoid,
        route: CubicRoute::Nested,
    };
    let mut rep = RunReport::new(cfg, &["eps", "increment", "boundary", "cubic", "mismatch", "mismatch_raw"]);
    let reports = cfg
        .eps
        .par_iter()
        .map(|&e| Ok(duhamel_check(&initial(cfg, e)?, &spec, &kernels, &dc)?))
        .collect::<Result<Vec<_>, LabError>>()?;
    for (e, r) in cfg.eps.iter().zip(&reports) {
        rep.row(format!("eps={e}"), vec![*e, r.increment, r.boundary, r.cubic, r.mismatch, r.mismatch_raw]);
    }
    let col = |f: fn(&kg_dynamics::DuhamelReport) -> f64| reports.iter().map(f).collect::<Vec<_>>();
    let win = eps_window(cfg);
    let boundary = FitSummary::loglog("boundary_exponent", &cfg.eps, &col(|r| r.boundary), &win)?;
    let cubic = FitSummary::loglog("cubic_exponent", &cfg.eps, &col(|r| r.cubic), &win)?;
    let mismatch = FitSummary::loglog("mismatch_exponent", &cfg.eps, &col(|r| r.mismatch), &win)?;
    let raw = FitSummary::loglog("mismatch_raw_exponent", &cfg.eps, &col(|r| r.mismatch_raw), &win)?;
    exponent_checks(&mut rep, cfg, &boundary);
    if let (Some(target), Some(tol)) = (cfg.thresholds.cubic_target, cfg.thresholds.cubic_tolerance) {
        rep.check(Check::within(&cubic.name, cubic.slope, target, tol));
    }
    if let Some(m) = cfg.thresholds.min_exponent {
        rep.check(Check::at_least(&mismatch.name, mismatch.slope, m));
    }
    rep.note("mismatch subtracts the integrator's own linear flow; mismatch_raw compares with V(1)");
    rep.constant("nodes", reports.first().map_or(0.0, |r| r.nodes as f64));
    rep.fits.extend([boundary, cubic, mismatch, raw]);
    Ok(rep.finish())
}

/// Lifespans `T(ε)`; survivors to `t_end` enter the fit as lower bounds.
pub fn lifespan_sweep(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let spec = cfg.spec();
    let rc = RunConfig::new(cfg.t_end, cfg.dt, cfg.regularity);
    let mut rep = RunReport::new(cfg, &["eps", "lifespan", "survived", "hn_initial", "hn_last"]);
    let runs = cfg
        .eps
        .par_iter()
        .map(|&e| Ok(run_to_time(&initial(cfg, e)?, &spec, &rc)?))
        .collect::<Result<Vec<_>, LabError>>()?;
    let mut order: Vec<usize> = (0..cfg.eps.len()).collect();
    order.sort_by(|&a, &b| cfg.eps[b].total_cmp(&cfg.eps[a]));
    let mut lifespans = Vec::new();
    for &i in &order {
        let (e, tr) = (cfg.eps[i], &runs[i]);
        let life = tr.verdict.lifespan();
        let (h0, h1) = (tr.rows[0].hn, tr.rows.last().map_or(f64::NAN, |r| r.hn));
        rep.row(format!("eps={e} {}", tr.verdict.label()), vec![e, life, tr.verdict.survived() as u8 as f64, h0, h1]);
        if tr.verdict.survived() {
            rep.note(format!("eps={e} survived to {life}; its lifespan is a lower bound"));
        }
        lifespans.push(life);
    }
    // Decreasing ε, so lifespans must not decrease.
    let monotone = lifespans.windows(2).all(|w| w[1] >= w[0]);
    let inv: Vec<f64> = order.iter().map(|&i| 1.0 / cfg.eps[i]).collect();
    let fit = FitSummary::loglog("lifespan_vs_inverse_eps", &inv, &lifespans, &eps_window(cfg))?;
    rep.constant("monotone_in_eps", monotone as u8 as f64);
    if let Some(m) = cfg.thresholds.min_exponent {
        rep.check(Check::holds("monotone_in_eps", monotone));
        rep.check(Check::at_least(&fit.name, fit.slope, m));
    }
    rep.constant("reference_exponent", 4.0);
    rep.constant("growth_limit", rc.growth_limit);
    rep.fits.push(fit);
    Ok(rep.finish())
}

/// One trajectory to the trust horizon: weighted and Sobolev growth, Cauchy behaviour of the
/// profile, and the sandwich constants of the weighted norm along the way.
pub fn weighted_bootstrap(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let spec = cfg.spec();
    let eps = cfg.eps[0];
    let horizon = cfg.t_end.min(cfg.half_len / 4.0);
    let mut rc = RunConfig::new(horizon, cfg.dt, cfg.regularity);
    rc.per_decade = cfg.per_decade;
    rc.keep_snapshots = true;
    rc.monitors = vec![Monitor::on_profile(NormSpec::WeightedL2(cfg.weight))];
    let tr = run_to_time(&initial(cfg, eps)?, &spec, &rc)?;
    let mut rep = RunReport::new(cfg, &["t", "hn", "weighted", "sandwich_lower", "sandwich_upper", "cauchy"]);

    let profiles: Vec<(f64, kg_spectral::Field<f64>)> = tr.snapshots.iter().map(|s| (s.t, s.profile())).collect();
    let (lo, hi) = (cfg.window.0, cfg.window.1.min(horizon));
    let scat = scattering_limit(&profiles, cfg.weight, cfg.regularity, (lo, hi))?;
    let (hn0, w0) = (tr.rows[0].hn, tr.rows[0].values[0]);
    let (mut hn_growth, mut w_growth) = (0.0f64, 0.0f64);
    let mut sandwich_finite = true;
    for (k, (row, (_, v))) in tr.rows.iter().zip(&profiles).enumerate() {
        let sw = sandwich_constants(v, cfg.weight)?;
        sandwich_finite &= sw.lower.is_finite() && sw.upper.is_finite() && sw.lower > 0.0 && sw.upper > 0.0;
        hn_growth = hn_growth.max(row.hn / hn0);
        w_growth = w_growth.max(row.values[0] / w0);
        let cauchy = scat.distances.get(k).copied().unwrap_or(0.0);
        rep.row(format!("t={:.4}", row.t), vec![row.t, row.hn, row.values[0], sw.lower, sw.upper, cauchy]);
    }
    rep.constant("eps", eps);
    rep.constant("horizon", horizon);
    rep.constant("hn_growth", hn_growth);
    rep.constant("weighted_growth", w_growth);
    rep.check(Check::holds("survived", tr.verdict.survived()));
    if let Some(g) = cfg.thresholds.max_growth {
        rep.check(Check::at_most("hn_growth", hn_growth, g));
        rep.check(Check::at_most("weighted_growth", w_growth, g));
    }
    rep.check(Check::holds("cauchy_monotone", scat.monotone));
    rep.check(Check::holds("sandwich_finite", sandwich_finite));
    scattering_fit(&mut rep, &scat, lo, hi);
    Ok(rep.finish())
}

fn scattering_fit(rep: &mut RunReport, scat: &kg_dynamics::ScatteringReport, lo: f64, hi: f64) {
    rep.constant("scattering_predicted", scat.predicted);
    if let Some(s) = scat.slope {
        rep.constant("scattering_slope", s);
        rep.constant("scattering_r2", scat.r2.unwrap_or(f64::NAN));
    }
    rep.note(format!(
        "scattering exponent over [{lo}, {hi}] {} the +-50% band around {:.4}",
        if scat.within_band { "inside" } else { "outside" },
        scat.predicted
    ));
}

/// Decay of `‖V(t) - V(T)‖` along the trajectory; report-only.
pub fn scattering(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let spec = cfg.spec();
    let horizon = cfg.t_end.min(cfg.half_len / 4.0);
    let mut rc = RunConfig::new(horizon, cfg.dt, cfg.regularity);
    rc.per_decade = cfg.per_decade;
    rc.keep_snapshots = true;
    let mut rep = RunReport::new(cfg, &["eps", "t", "distance"]);
    let (lo, hi) = (cfg.window.0, cfg.window.1.min(horizon));
    for &e in &cfg.eps {
        let tr = run_to_time(&initial(cfg, e)?, &spec, &rc)?;
        let profiles: Vec<_> = tr.snapshots.iter().map(|s| (s.t, s.profile())).collect();
        let scat = scattering_limit(&profiles, cfg.weight, cfg.regularity, (lo, hi))?;
        for (t, d) in scat.times.iter().zip(&scat.distances) {
            rep.row(format!("eps={e} t={t:.4}"), vec![e, *t, *d]);
        }
        if let Some(s) = scat.slope {
            rep.constant(format!("slope_eps={e}"), s);
        }
        rep.constant("predicted", scat.predicted);
        rep.note(format!("eps={e}: monotone={} within_band={}", scat.monotone, scat.within_band));
    }
    Ok(rep.finish())
}

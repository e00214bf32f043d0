//! Linear-flow experiments: sup-norm decay and accumulated Strichartz growth of `e^{itΛ}f`.

use std::sync::Arc;

use kg_dynamics::log_schedule;
use kg_norms::StrichartzAccumulator;
use kg_spectral::{lp_project, make_grid, semigroup, Band, Field, Grid, Sign};

use crate::config::ExperimentConfig;
use crate::error::LabError;
use crate::report::{Check, FitSummary, RunReport};

/// Trust horizon `L/4`, past which wrap-around pollutes sup norms.
pub fn trust_horizon(cfg: &ExperimentConfig) -> f64 {
    cfg.half_len / 4.0
}

/// `P_I` applied to the Gaussian `exp(-|x|²/2w²)`.
pub fn linear_datum(cfg: &ExperimentConfig) -> Result<(Arc<Grid<f64>>, Field<f64>), LabError> {
    let g = make_grid(cfg.dim, cfg.n, cfg.half_len)?;
    let w2 = 2.0 * cfg.width * cfg.width;
    let raw = Field::from_real_fn(&g, |x| (-x.iter().map(|v| v * v).sum::<f64>() / w2).exp());
    let f = lp_project(&raw, Band::Interval(cfg.bands.0, cfg.bands.1))?;
    Ok((g, f))
}

fn window(cfg: &ExperimentConfig) -> (f64, f64) {
    (cfg.window.0, cfg.window.1.min(trust_horizon(cfg)))
}

pub fn dispersive_decay(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let (_, f) = linear_datum(cfg)?;
    let (lo, hi) = window(cfg);
    let mut rep = RunReport::new(cfg, &["t", "sup"]);
    let ts = log_schedule(lo, hi, cfg.per_decade);
    let sups: Vec<f64> = ts.iter().map(|&t| semigroup(&f, t, Sign::Plus).norm_sup()).collect();
    for (t, s) in ts.iter().zip(&sups) {
        rep.row(format!("t={t:.4}"), vec![*t, *s]);
    }
    let fit = FitSummary::loglog("sup_vs_t", &ts, &sups, &format!("[{lo}, {hi}]"))?;
    rep.constant("expected_exponent", -(cfg.dim as f64) / 2.0);
    rep.constant("sup_at_0", f.norm_sup());
    if let (Some(target), Some(tol)) = (cfg.thresholds.target, cfg.thresholds.tolerance) {
        rep.check(Check::within("decay_exponent", fit.slope, target, tol));
    }
    rep.fits.push(fit);
    Ok(rep.finish())
}

pub fn strichartz_growth(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let (_, f) = linear_datum(cfg)?;
    let (lo, hi) = window(cfg);
    let mut rep = RunReport::new(cfg, &["t", "sup", "accumulated"]);
    let mut acc = StrichartzAccumulator::new(2.0, 0.0)?;
    let ts = log_schedule(kg_dynamics::T0, hi, cfg.per_decade);
    let (mut fit_t, mut fit_v) = (Vec::new(), Vec::new());
    for &t in &ts {
        let sup = semigroup(&f, t, Sign::Plus).norm_sup();
        let v = acc.update(t, sup)?;
        rep.row(format!("t={t:.4}"), vec![t, sup, v]);
        if t >= lo * (1.0 - 1e-12) {
            fit_t.push(t);
            fit_v.push(v);
        }
    }
    let win = format!("[{lo}, {hi}]");
    let lt: Vec<f64> = fit_t.iter().map(|t| t.ln()).collect();
    // Both laws are fitted and reported; the checks pick the one for the dimension.
    let semilog = FitSummary::new("accumulated_vs_ln_t", &lt, &fit_v, &win)?;
    let loglog = FitSummary::loglog("accumulated_vs_t", &fit_t, &fit_v, &win)?;
    if cfg.dim >= 2 {
        if let Some(r2) = cfg.thresholds.min_r2 {
            rep.check(Check::at_least("affine_in_ln_t_r2", semilog.r2, r2));
        }
    } else if let (Some(target), Some(tol)) = (cfg.thresholds.target, cfg.thresholds.tolerance) {
        rep.check(Check::within("growth_exponent", loglog.slope, target, tol));
    }
    rep.fits.push(semilog);
    rep.fits.push(loglog);
    Ok(rep.finish())
}

//! Phase lower-bound scans and multiplier-bound measurements.

use kg_dynamics::Kernels;
use kg_resonance::{
    family_a, family_energy, family_phase_a, multiplier_bound_measure, phase_bound_scan, random_suite, BoundKind,
    Exponents, PhaseScan, SignPair,
};
use kg_spectral::make_grid;

use crate::config::ExperimentConfig;
use crate::error::LabError;
use crate::report::{Check, RunReport};

const SCAN_COLUMNS: [&str; 7] = ["dim", "R", "h", "C_measured", "C_gradient", "min_abs_phase", "singular"];

fn scan_row(rep: &mut RunReport, s: &PhaseScan) {
    rep.row(
        s.signs.label(),
        vec![s.dim as f64, s.radius, s.step, s.c_measured, s.c_gradient, s.min_abs_phase, s.singular as f64],
    );
}

/// `C_measured` of `|Φ^{-1}| ≤ C(1 + min{|ξ|,|η|,|ξ-η|})^{-1}`-type bounds at `h` and `h/2`.
pub fn phase_scan(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let mut rep = RunReport::new(cfg, &SCAN_COLUMNS);
    for &d in &cfg.dims {
        for s in cfg.sign_pairs()? {
            let coarse = phase_bound_scan(s, d, cfg.radius, cfg.step)?;
            let fine = phase_bound_scan(s, d, cfg.radius, cfg.step / 2.0)?;
            scan_row(&mut rep, &coarse);
            scan_row(&mut rep, &fine);
            let tag = format!("{}_d{d}", s.label());
            rep.constant(format!("C_{tag}"), coarse.c_measured);
            rep.constant(format!("C_{tag}_half_step"), fine.c_measured);
            rep.check(Check::at_most(&format!("singular_{tag}"), (coarse.singular + fine.singular) as f64, 0.0));
            rep.check(Check::holds(
                &format!("finite_{tag}"),
                coarse.c_measured.is_finite() && fine.c_measured.is_finite() && coarse.c_measured > 0.0,
            ));
            if let Some(stab) = cfg.thresholds.stability {
                let drift = (fine.c_measured - coarse.c_measured).abs() / coarse.c_measured;
                rep.check(Check::at_most(&format!("drift_{tag}"), drift, stab));
            }
        }
    }
    Ok(rep.finish())
}

/// Bound constants of `a_{μν}`, `Φ^{-1}a_{μν}` and `m_S`, on the configured grid and on the
/// grid with `L` and `n` doubled.
pub fn multiplier_bounds(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    let mut rep = RunReport::new(cfg, &["k1", "k2", "constant", "constant_refined", "ratio"]);
    let kernels = Kernels::derive(&cfg.spec())?;
    let g1 = make_grid(cfg.dim, cfg.n, cfg.half_len)?;
    let g2 = make_grid(cfg.dim, 2 * cfg.n, 2.0 * cfg.half_len)?;
    let (s1, s2) = (random_suite(&g1, 4, 2, cfg.seed), random_suite(&g2, 4, 2, cfg.seed + 1));
    let e = Exponents::new(2.0, &[f64::INFINITY, 2.0])?;
    let ks = cfg.bands;
    for s in cfg.sign_pairs()? {
        let a = kernels.get(s);
        let cases = [
            ("a", family_a::<f64>(s, a), BoundKind::Quadratic),
            ("phase_a", family_phase_a::<f64>(s, a), BoundKind::PhaseQuadratic),
            ("energy", family_energy::<f64>(s), BoundKind::Energy),
        ];
        for (name, m, kind) in cases {
            let c1 = multiplier_bound_measure(&m, kind, None, ks, &e, &s1)?.constant;
            let c2 = multiplier_bound_measure(&m, kind, None, ks, &e, &s2)?.constant;
            let ratio = c1.max(c2) / c1.min(c2);
            rep.row(format!("{name}[{}]", s.label()), vec![ks.0 as f64, ks.1 as f64, c1, c2, ratio]);
            rep.constant(format!("{name}_{}", s.label()), c1);
            if let Some(stab) = cfg.thresholds.stability {
                rep.check(Check::at_most(&format!("refinement_{name}_{}", s.label()), ratio, 1.0 + stab));
            }
        }
    }
    let _ = SignPair::ALL;
    Ok(rep.finish())
}

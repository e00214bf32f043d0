//! Scattering diagnostics on a trajectory of profile snapshots `V(t_k)`.

use serde::{Deserialize, Serialize};

use kg_norms::fit_loglog;
use kg_spectral::{Field, Float};

use crate::error::DynamicsError;

/// Fewest checkpoints (the limit excluded) a scattering fit accepts.
pub const MIN_CHECKPOINTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringReport {
    pub times: Vec<f64>,
    /// `‖V(t_k) - V∞‖_{L²}` with `V∞` the last snapshot.
    pub distances: Vec<f64>,
    /// `distances` nonincreasing over the checkpoints before the last, up to `1e-12‖V∞‖` of roundoff.
    pub monotone: bool,
    /// Fitted exponent of `distances` against `t`, if the fit has two or more positive points.
    pub slope: Option<f64>,
    pub r2: Option<f64>,
    /// `-α(1 - 1/N)`.
    pub predicted: f64,
    /// `|slope - predicted| ≤ |predicted|/2`.
    pub within_band: bool,
}

/// `V∞ = V(t_last)` and the decay of `‖V(t) - V∞‖` over `window`.
pub fn scattering_limit<T: Float>(
    snapshots: &[(f64, Field<T>)],
    alpha: f64,
    regularity: f64,
    window: (f64, f64),
) -> Result<ScatteringReport, DynamicsError> {
    if snapshots.len() < MIN_CHECKPOINTS + 1 {
        return Err(DynamicsError::Checkpoints { need: MIN_CHECKPOINTS + 1, got: snapshots.len() });
    }
    let (t_last, v_inf) = snapshots.last().expect("nonempty");
    let mut times = Vec::with_capacity(snapshots.len() - 1);
    let mut distances = Vec::with_capacity(snapshots.len() - 1);
    for (t, v) in &snapshots[..snapshots.len() - 1] {
        if t >= t_last {
            return Err(DynamicsError::States("snapshot times must increase".into()));
        }
        times.push(*t);
        distances.push(v.sub(v_inf)?.norm_l2().as_f64());
    }
    let slack = 1e-12 * v_inf.norm_l2().as_f64();
    let monotone = distances.windows(2).all(|w| w[1] <= w[0] + slack);
    let fit = fit_loglog(&times, &distances, window);
    let predicted = -alpha * (1.0 - 1.0 / regularity);
    let slope = fit.map(|f| f.slope);
    let within_band = slope.is_some_and(|s| (s - predicted).abs() <= predicted.abs() / 2.0);
    Ok(ScatteringReport { times, distances, monotone, slope, r2: fit.map(|f| f.r2), predicted, within_band })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::KGState;
    use kg_spectral::{make_grid, C};

    #[test]
    fn linear_profiles_have_zero_distance() {
        let g = make_grid::<f64>(2, 16, 5.0).unwrap();
        let u = Field::from_real_fn(&g, |x| (-(x[0] * x[0] + x[1] * x[1])).exp());
        let st = KGState::new(1.0, u, Field::zeros(&g)).unwrap();
        let snaps: Vec<(f64, Field<f64>)> = (0..12)
            .map(|k| {
                let t = 1.0 + k as f64;
                (t, crate::solver::linear_exact(&st, t).profile())
            })
            .collect();
        let r = scattering_limit(&snaps, 0.2, 11.0, (2.0, 12.0)).unwrap();
        assert!(r.distances.iter().all(|&d| d < 1e-12), "{:?}", r.distances);
        assert!(r.monotone);
    }

    #[test]
    fn power_law_distances_are_fitted() {
        let g = make_grid::<f64>(1, 16, 5.0).unwrap();
        let base = Field::from_real_fn(&g, |x| x[0].cos());
        let snaps: Vec<(f64, Field<f64>)> = (0..=12)
            .map(|k| {
                let t = 2f64.powi(k);
                let s = if k == 12 { 0.0 } else { t.powf(-0.4) };
                (t, base.scale(C::new(s, 0.0)))
            })
            .collect();
        let r = scattering_limit(&snaps, 0.5, 5.0, (2.0, 1e3)).unwrap();
        assert!(r.monotone);
        assert!((r.slope.unwrap() + 0.4).abs() < 1e-10);
        assert!(r.within_band);
    }

    #[test]
    fn too_few_checkpoints() {
        let g = make_grid(1, 8, 1.0).unwrap();
        let snaps = vec![(1.0, Field::<f64>::zeros(&g)); 5];
        assert!(matches!(
            scattering_limit(&snaps, 0.2, 8.0, (2.0, 10.0)),
            Err(DynamicsError::Checkpoints { got: 5, .. })
        ));
    }
}

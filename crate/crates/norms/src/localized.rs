//! Localized dispersive and Strichartz bounds for physically and spectrally
//! localized pieces `Q_j P_k V` of a profile.

use kg_spectral::{lp_project, q_cutoff, semigroup, Band, Field, Float, Sign};

use crate::spec::NormError;
use crate::strichartz::StrichartzAccumulator;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizedParams {
    pub k: i32,
    pub j: i32,
    /// Regularity spent on the frequency factor in the dispersive bound.
    pub n1: f64,
    /// Regularity spent on the time decay in the dispersive bound.
    pub n2: f64,
    /// Regularity for the Strichartz bound.
    pub n: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub alpha: f64,
    /// Top Sobolev index of the bootstrap norm.
    pub top: f64,
    pub sign: Sign,
}

impl LocalizedParams {
    pub fn validate(&self) -> Result<(), NormError> {
        let bad = |m: &str| Err(NormError::Params(m.to_string()));
        if !(0.0 <= self.beta1 && self.beta1 < self.beta2 && self.beta2 <= 1.0) {
            return bad("need 0 <= beta1 < beta2 <= 1");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0,1)");
        }
        for v in [self.n1, self.n2, self.n] {
            if !(0.0..=self.top).contains(&v) {
                return bad("regularity indices must lie in [0, top]");
            }
        }
        if self.k < -1 || self.j < -1 {
            return bad("band and shell indices must be at least -1");
        }
        Ok(())
    }

    fn dispersive_rhs(&self, t: f64, eps: f64) -> f64 {
        let (k, j, a, top) = (self.k as f64, self.j as f64, self.alpha, self.top);
        let kexp = k * (1.0 - self.n1 + a * (1.0 - self.n2 / top)) + j * a * (self.n1 - self.n2) / top;
        2f64.powf(kexp) * t.powf(-a * (1.0 - self.n2 / top)) * eps
    }

    fn strichartz_rhs(&self, eps: f64) -> f64 {
        let (k, j, a, top) = (self.k as f64, self.j as f64, self.alpha, self.top);
        let e = k * (1.0 + self.beta2 - self.n) + j * self.beta2 - j * a * (1.0 - self.n / top);
        2f64.powf(e) * eps
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizedReport {
    pub dispersive_ratio: f64,
    pub strichartz_ratio: f64,
}

fn piece<T: Float>(v: &Field<T>, k: i32, j: i32) -> Result<Field<T>, NormError> {
    let pk = lp_project(v, Band::Single(k))?;
    Ok(q_cutoff(&pk, j)?)
}

/// Largest left/right ratios of the localized dispersive and Strichartz bounds
/// over the snapshot schedule `(t, V(t))`; `eps` is the bootstrap level.
pub fn localized_estimates_check<T: Float>(
    snapshots: &[(f64, Field<T>)],
    params: &LocalizedParams,
    eps: f64,
) -> Result<LocalizedReport, NormError> {
    params.validate()?;
    let mut acc = StrichartzAccumulator::new(2.0, params.beta1 / 2.0)?;
    let mut disp: f64 = 0.0;
    let mut stric: f64 = 0.0;
    for (t, v) in snapshots {
        let w = piece(v, params.k, params.j)?;
        let prop = semigroup(&w, T::lit(*t), params.sign);
        let lhs = lp_project(&prop, Band::Interval(params.k - 1, params.k + 1))?.norm_sup().as_f64();
        acc.update(*t, lhs)?;
        if lhs > 0.0 {
            disp = disp.max(lhs / params.dispersive_rhs(*t, eps));
        }
        let integral = acc.norm();
        if integral > 0.0 {
            stric = stric.max(integral / params.strichartz_rhs(eps));
        }
    }
    Ok(LocalizedReport { dispersive_ratio: disp, strichartz_ratio: stric })
}

/// `max ‖Q_j P_k V‖ / (2^{-jα(1-n/N) - nk} ε)` over the listed `(j, k, n)`.
pub fn interpolation_ratio<T: Float>(
    v: &Field<T>,
    samples: &[(i32, i32, f64)],
    alpha: f64,
    top: f64,
    eps: f64,
) -> Result<f64, NormError> {
    let mut worst: f64 = 0.0;
    for &(j, k, n) in samples {
        let lhs = piece(v, k, j)?.norm_l2().as_f64();
        let rhs = 2f64.powf(-(j as f64) * alpha * (1.0 - n / top) - n * k as f64) * eps;
        worst = worst.max(lhs / rhs);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kg_spectral::make_grid;

    fn params() -> LocalizedParams {
        LocalizedParams {
            k: 0,
            j: 2,
            n1: 0.0,
            n2: 12.0,
            n: 6.0,
            beta1: 0.2,
            beta2: 0.6,
            alpha: 0.18,
            top: 12.0,
            sign: Sign::Plus,
        }
    }

    #[test]
    fn zero_field_gives_zero_ratio() {
        let g = make_grid::<f64>(2, 16, 8.0).unwrap();
        let snaps: Vec<_> = [1.0, 2.0, 4.0].iter().map(|&t| (t, Field::zeros(&g))).collect();
        let r = localized_estimates_check(&snaps, &params(), 1.0).unwrap();
        assert_eq!(r.dispersive_ratio, 0.0);
        assert_eq!(r.strichartz_ratio, 0.0);
    }

    #[test]
    fn rejects_ordered_betas() {
        let g = make_grid::<f64>(2, 16, 8.0).unwrap();
        let snaps = vec![(1.0, Field::zeros(&g))];
        let mut p = params();
        p.beta1 = 0.6;
        p.beta2 = 0.6;
        assert!(localized_estimates_check(&snaps, &p, 1.0).is_err());
        p.beta1 = 0.8;
        assert!(localized_estimates_check(&snaps, &p, 1.0).is_err());
    }

    #[test]
    fn gaussian_profile_has_finite_ratios() {
        let g = make_grid::<f64>(2, 64, 16.0).unwrap();
        let v = Field::from_real_fn(&g, |x| 0.01 * (-(x[0] * x[0] + x[1] * x[1]) / 4.0).exp());
        let snaps: Vec<_> = [1.0, 1.5, 2.0, 3.0, 4.0].iter().map(|&t| (t, v.clone())).collect();
        let mut p = params();
        p.n1 = 0.0;
        p.n2 = p.top;
        let r = localized_estimates_check(&snaps, &p, 0.05).unwrap();
        assert!(r.dispersive_ratio.is_finite() && r.strichartz_ratio.is_finite());
        assert!(r.dispersive_ratio > 0.0);
        let ir = interpolation_ratio(&v, &[(0, 0, 0.0), (1, 0, 6.0), (2, 1, 12.0)], 0.18, 12.0, 0.05).unwrap();
        assert!(ir.is_finite());
    }
}

use crate::spec::NormError;

/// Trapezoid accumulation of `∫ (s^w ‖f(s)‖_∞)^p ds` over checkpoints.
#[derive(Debug, Clone)]
pub struct StrichartzAccumulator {
    p: f64,
    weight: f64,
    value: f64,
    last: Option<(f64, f64)>,
    history: Vec<(f64, f64)>,
}

impl StrichartzAccumulator {
    pub fn new(p: f64, weight: f64) -> Result<Self, NormError> {
        if !(p >= 2.0) {
            return Err(NormError::Exponent(p));
        }
        Ok(StrichartzAccumulator { p, weight, value: 0.0, last: None, history: Vec::new() })
    }

    /// Register `‖f(t)‖_∞` at time `t`; `t` must increase strictly.
    pub fn update(&mut self, t: f64, sup: f64) -> Result<f64, NormError> {
        let integrand = (t.powf(self.weight) * sup).powf(self.p);
        if let Some((t0, v0)) = self.last {
            if !(t > t0) {
                return Err(NormError::NonMonotone { t, last: t0 });
            }
            self.value += 0.5 * (t - t0) * (v0 + integrand);
        }
        self.last = Some((t, integrand));
        self.history.push((t, self.value));
        Ok(self.value)
    }

    /// `∫ (s^w ‖f‖_∞)^p ds` so far.
    pub fn value(&self) -> f64 {
        self.value
    }

    /// `(∫ ...)^{1/p}`, the mixed norm itself.
    pub fn norm(&self) -> f64 {
        self.value.powf(1.0 / self.p)
    }

    pub fn history(&self) -> &[(f64, f64)] {
        &self.history
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_integrand() {
        let mut acc = StrichartzAccumulator::new(2.0, 0.0).unwrap();
        let m = 2000;
        for i in 0..=m {
            let t = (i as f64 / m as f64).exp();
            acc.update(t, 1.0).unwrap();
        }
        assert!((acc.value() - (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_monotone_time() {
        let mut acc = StrichartzAccumulator::new(2.0, 0.0).unwrap();
        acc.update(2.0, 1.0).unwrap();
        assert!(acc.update(2.0, 1.0).is_err());
        assert!(acc.update(1.0, 1.0).is_err());
        assert!(StrichartzAccumulator::new(1.5, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn nondecreasing(vals in proptest::collection::vec(0.0f64..10.0, 2..40)) {
            let mut acc = StrichartzAccumulator::new(3.0, 0.5).unwrap();
            let mut prev = 0.0;
            for (i, v) in vals.iter().enumerate() {
                let now = acc.update(1.0 + i as f64 * 0.3, *v).unwrap();
                prop_assert!(now >= prev);
                prev = now;
            }
        }
    }
}

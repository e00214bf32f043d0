/// Ordinary least-squares line `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

pub fn ols(x: &[f64], y: &[f64]) -> Option<Fit> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(Fit { slope, intercept: my - slope * mx, r2, points: n })
}

fn windowed(ts: &[f64], ys: &[f64], window: (f64, f64)) -> (Vec<f64>, Vec<f64>) {
    ts.iter()
        .zip(ys)
        .filter(|(t, y)| **t >= window.0 && **t <= window.1 && **y > 0.0 && y.is_finite())
        .map(|(t, y)| (*t, *y))
        .unzip()
}

/// Fit `ln y` against `ln t` over `window`.
pub fn fit_loglog(ts: &[f64], ys: &[f64], window: (f64, f64)) -> Option<Fit> {
    let (t, y) = windowed(ts, ys, window);
    let lx: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    ols(&lx, &ly)
}

/// Fit `y` against `ln t` over `window`.
pub fn fit_semilog(ts: &[f64], ys: &[f64], window: (f64, f64)) -> Option<Fit> {
    let (t, y) = windowed(ts, ys, window);
    let lx: Vec<f64> = t.iter().map(|v| v.ln()).collect();
    ols(&lx, &y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let ts: Vec<f64> = (0..20).map(|i| 2.0 + i as f64).collect();
        let ys: Vec<f64> = ts.iter().map(|t| 3.0 * t.powf(-0.7)).collect();
        let f = fit_loglog(&ts, &ys, (2.0, 100.0)).unwrap();
        assert!((f.slope + 0.7).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn window_filters_points() {
        let ts = [1.0, 2.0, 4.0, 8.0, 16.0];
        let ys = [100.0, 2.0, 4.0, 8.0, 1.0];
        let f = fit_loglog(&ts, &ys, (2.0, 8.0)).unwrap();
        assert_eq!(f.points, 3);
        assert!((f.slope - 1.0).abs() < 1e-12);
    }

    #[test]
    fn semilog_affine() {
        let ts: Vec<f64> = (1..30).map(|i| i as f64).collect();
        let ys: Vec<f64> = ts.iter().map(|t| 0.5 + 2.0 * t.ln()).collect();
        let f = fit_semilog(&ts, &ys, (1.0, 30.0)).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_input() {
        assert!(ols(&[1.0], &[1.0]).is_none());
        assert!(ols(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }
}

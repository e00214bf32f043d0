//! Seeded real initial data, normalised so that `‖u₀‖_{H^{N+1}} + ‖u₁‖_{H^N} = 1`
//! before scaling by the amplitude.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use kg_norms::sobolev;
use kg_spectral::{dealias, Field, Float, Grid, C};

use crate::state::{KGState, T0};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DataShape {
    /// Random coefficients on `|ξ| ≤ radius`.
    Band { radius: f64, with_mean: bool },
    /// Gaussian envelope of the given width times a random low-mode modulation.
    Localized { width: f64 },
}

/// `‖u‖_{H^{N+1}} + ‖w‖_{H^N}`.
pub fn data_norm<T: Float>(u: &Field<T>, w: &Field<T>, regularity: f64) -> f64 {
    (sobolev(u, T::lit(regularity + 1.0)) + sobolev(w, T::lit(regularity))).as_f64()
}

fn real_part<T: Float>(f: Field<T>) -> Field<T> {
    dealias(&f.re())
}

fn band<T: Float>(grid: &Arc<Grid<T>>, radius: f64, with_mean: bool, rng: &mut ChaCha8Rng) -> Field<T> {
    let data: Vec<C<T>> = (0..grid.len())
        .map(|i| {
            let (a, b): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let zero = grid.wavevector(i) == [0, 0, 0];
            let keep = grid.xi_norm(i).as_f64() <= radius && !grid.is_nyquist(i) && (with_mean || !zero);
            if keep {
                C::new(T::lit(a), T::lit(b))
            } else {
                C::new(T::zero(), T::zero())
            }
        })
        .collect();
    real_part(Field::from_spectrum(grid, data).expect("grid length"))
}

fn localized<T: Float>(grid: &Arc<Grid<T>>, width: f64, rng: &mut ChaCha8Rng) -> Field<T> {
    let d = grid.dim();
    let waves: Vec<([f64; 3], f64, f64)> = (0..3)
        .map(|_| {
            let mut k = [0.0; 3];
            for v in k.iter_mut().take(d) {
                *v = rng.gen_range(-1.0..1.0) / width;
            }
            (k, rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(-0.5..0.5))
        })
        .collect();
    real_part(Field::from_real_fn(grid, |x| {
        let r2: f64 = x.iter().map(|v| v.as_f64() * v.as_f64()).sum();
        let env = (-r2 / (2.0 * width * width)).exp();
        let m: f64 = waves
            .iter()
            .map(|(k, ph, c)| c * (x.iter().zip(k).map(|(a, b)| a.as_f64() * b).sum::<f64>() + ph).cos())
            .sum();
        T::lit(env * (1.0 + m))
    }))
}

/// State at `t = 1` with data norm `amplitude`, driven by `seed`.
pub fn initial_data<T: Float>(
    grid: &Arc<Grid<T>>,
    shape: DataShape,
    regularity: f64,
    amplitude: f64,
    seed: u64,
) -> KGState<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (u, w) = match shape {
        DataShape::Band { radius, with_mean } => {
            (band(grid, radius, with_mean, &mut rng), band(grid, radius, with_mean, &mut rng))
        }
        DataShape::Localized { width } => (localized(grid, width, &mut rng), localized(grid, width, &mut rng)),
    };
    let n = data_norm(&u, &w, regularity);
    let s = C::new(T::lit(if n > 0.0 { amplitude / n } else { 0.0 }), T::zero());
    KGState { t: T::lit(T0), u: u.scale(s), w: w.scale(s) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kg_spectral::make_grid;

    #[test]
    fn normalised_real_and_reproducible() {
        let g = make_grid(2, 16, 6.0).unwrap();
        for shape in [DataShape::Band { radius: 1.0, with_mean: true }, DataShape::Localized { width: 1.5 }] {
            let a = initial_data(&g, shape, 4.0, 0.01, 7);
            let b = initial_data(&g, shape, 4.0, 0.01, 7);
            assert!((data_norm(&a.u, &a.w, 4.0) - 0.01).abs() < 1e-14);
            assert!(a.imaginary_part() < 1e-15);
            assert_eq!(a.u.max_abs_diff(&b.u).unwrap(), 0.0);
            let c = initial_data(&g, shape, 4.0, 0.01, 8);
            assert!(a.u.max_abs_diff(&c.u).unwrap() > 0.0);
        }
    }

    #[test]
    fn band_respects_radius_and_mean() {
        let g = make_grid(1, 32, 8.0).unwrap();
        let st = initial_data(&g, DataShape::Band { radius: 1.0, with_mean: false }, 3.0, 1.0, 1);
        for (i, c) in st.u.spectrum().iter().enumerate() {
            if g.xi_norm(i) > 1.0 || i == 0 {
                assert!(c.norm() < 1e-15);
            }
        }
    }
}

//! Fourier multipliers, physical cutoffs and the linear propagator.

use crate::cutoff::{psi_band, Band};
use crate::error::SpectralError;
use crate::field::Field;
use crate::float::{expi, Float, C};
use crate::grid::Grid;

/// Sign of a propagator or of a `U_±` component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value<T: Float>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn parse(c: char) -> Option<Sign> {
        match c {
            '+' | 'p' => Some(Sign::Plus),
            '-' | 'm' => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// `⟨ξ⟩ = (1 + |ξ|²)^{1/2}`.
#[inline]
pub fn japanese<T: Float>(xi_norm: T) -> T {
    (T::one() + xi_norm * xi_norm).sqrt()
}

/// Apply a Fourier multiplier `m(idx)`, zeroing the Nyquist row.
pub fn multiplier<T: Float>(f: &Field<T>, m: impl Fn(usize) -> C<T>) -> Field<T> {
    let g = f.grid().clone();
    f.map_spectrum(|i, c| if g.is_nyquist(i) { C::new(T::zero(), T::zero()) } else { c * m(i) })
}

/// Apply an even real multiplier, keeping the Nyquist row.
pub fn even_multiplier<T: Float>(f: &Field<T>, m: impl Fn(usize) -> C<T>) -> Field<T> {
    f.map_spectrum(|i, c| c * m(i))
}

/// Littlewood-Paley projection onto a band, interval or low-pass.
pub fn lp_project<T: Float>(f: &Field<T>, band: Band) -> Result<Field<T>, SpectralError> {
    check_band(band)?;
    let g = f.grid().clone();
    Ok(multiplier(f, |i| C::new(band.weight(g.xi_norm(i)), T::zero())))
}

/// Intervals may start below `-1` (they are clamped); single bands and low-passes may not.
fn check_band(band: Band) -> Result<(), SpectralError> {
    match band {
        Band::Single(k) | Band::AtMost(k) | Band::Interval(_, k) if k < -1 => Err(SpectralError::Band(k)),
        _ => Ok(()),
    }
}

/// Projector bound to one grid; rejects fields living elsewhere.
#[derive(Debug, Clone)]
pub struct Projector<T: Float> {
    grid: std::sync::Arc<Grid<T>>,
    band: Band,
}

impl<T: Float> Projector<T> {
    pub fn new(grid: &std::sync::Arc<Grid<T>>, band: Band) -> Result<Self, SpectralError> {
        check_band(band)?;
        Ok(Projector { grid: grid.clone(), band })
    }

    pub fn apply(&self, f: &Field<T>) -> Result<Field<T>, SpectralError> {
        if *f.grid().as_ref() != *self.grid {
            return Err(SpectralError::GridMismatch);
        }
        lp_project(f, self.band)
    }
}

/// Physical dyadic cutoff `Q_j f = ψ_j(|x|) f`.
pub fn q_cutoff<T: Float>(f: &Field<T>, j: i32) -> Result<Field<T>, SpectralError> {
    if j < -1 {
        return Err(SpectralError::Band(j));
    }
    let g = f.grid().clone();
    Ok(f.map_physical(|i, c| c * psi_band(j, g.x_norm(i))))
}

/// Largest physical shell index needed for `Σ_j Q_j = Id` on this grid.
pub fn q_top<T: Float>(grid: &Grid<T>) -> i32 {
    let rmax = grid.half_len() * T::of_usize(grid.dim()).sqrt();
    let mut j = -1;
    while T::lit(1.25) * T::lit(2f64.powi(j)) < rmax {
        j += 1;
    }
    j
}

/// `Λ^s f`, the multiplier `(1+|ξ|²)^{s/2}`.
pub fn lambda_apply<T: Float>(f: &Field<T>, s: T) -> Field<T> {
    let g = f.grid().clone();
    let half = s / T::lit(2.0);
    even_multiplier(f, |i| {
        let r = g.xi_norm(i);
        C::new((T::one() + r * r).powf(half), T::zero())
    })
}

/// `e^{±itΛ} f`.
pub fn semigroup<T: Float>(f: &Field<T>, t: T, sign: Sign) -> Field<T> {
    let g = f.grid().clone();
    let st = sign.value::<T>() * t;
    even_multiplier(f, |i| expi(st * japanese(g.xi_norm(i))))
}

/// Spectral derivative `∂_axis f`.
pub fn derivative<T: Float>(f: &Field<T>, axis: usize) -> Field<T> {
    let g = f.grid().clone();
    assert!(axis < g.dim(), "axis out of range");
    multiplier(f, |i| C::new(T::zero(), g.xi(i)[axis]))
}

/// `Δ f`.
pub fn laplacian<T: Float>(f: &Field<T>) -> Field<T> {
    let g = f.grid().clone();
    even_multiplier(f, |i| {
        let r = g.xi_norm(i);
        C::new(-r * r, T::zero())
    })
}

/// 2/3-rule truncation.
pub fn dealias<T: Float>(f: &Field<T>) -> Field<T> {
    let g = f.grid().clone();
    f.map_spectrum(|i, c| if g.dealias_keep(i) { c } else { C::new(T::zero(), T::zero()) })
}

/// Alias-free product: truncate both factors, multiply, truncate the result.
pub fn product_dealiased<T: Float>(f: &Field<T>, h: &Field<T>) -> Result<Field<T>, SpectralError> {
    f.check_grid(h)?;
    let p = dealias(f).mul_pointwise(&dealias(h))?;
    Ok(dealias(&p))
}

/// Measured Bernstein ratio `‖P_k f‖_∞ / (2^{kd/2} ‖P_k f‖_2)`.
pub fn bernstein_ratio<T: Float>(f: &Field<T>, k: i32) -> Result<T, SpectralError> {
    let p = lp_project(f, Band::Single(k))?;
    let d = f.grid().dim() as i32;
    let scale = T::lit(2f64.powf(k as f64 * d as f64 / 2.0));
    Ok(p.norm_sup() / (scale * p.norm_l2()))
}

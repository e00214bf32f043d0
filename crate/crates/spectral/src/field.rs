//! Complex scalar fields with paired physical and frequency representations.

use std::cell::OnceCell;
use std::sync::Arc;

use crate::error::SpectralError;
use crate::float::{Float, C};
use crate::grid::Grid;

/// Samples on a [`Grid`]; whichever representation is missing is computed on demand.
#[derive(Clone, Debug)]
pub struct Field<T: Float> {
    grid: Arc<Grid<T>>,
    phys: OnceCell<Vec<C<T>>>,
    spec: OnceCell<Vec<C<T>>>,
}

/// Which representation currently holds authoritative data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Repr {
    Physical,
    Frequency,
    Both,
}

impl<T: Float> Field<T> {
    pub fn zeros(grid: &Arc<Grid<T>>) -> Self {
        let z = vec![C::new(T::zero(), T::zero()); grid.len()];
        let phys = OnceCell::from(z.clone());
        let spec = OnceCell::from(z);
        Field { grid: grid.clone(), phys, spec }
    }

    pub fn from_physical(grid: &Arc<Grid<T>>, data: Vec<C<T>>) -> Result<Self, SpectralError> {
        if data.len() != grid.len() {
            return Err(SpectralError::Length { got: data.len(), want: grid.len() });
        }
        Ok(Field { grid: grid.clone(), phys: OnceCell::from(data), spec: OnceCell::new() })
    }

    pub fn from_spectrum(grid: &Arc<Grid<T>>, data: Vec<C<T>>) -> Result<Self, SpectralError> {
        if data.len() != grid.len() {
            return Err(SpectralError::Length { got: data.len(), want: grid.len() });
        }
        Ok(Field { grid: grid.clone(), phys: OnceCell::new(), spec: OnceCell::from(data) })
    }

    /// Sample `f` at every grid point (position passed as a `d`-slice).
    pub fn from_fn(grid: &Arc<Grid<T>>, f: impl Fn(&[T]) -> C<T>) -> Self {
        let d = grid.dim();
        let data: Vec<C<T>> = (0..grid.len()).map(|i| f(&grid.position(i)[..d])).collect();
        Field { grid: grid.clone(), phys: OnceCell::from(data), spec: OnceCell::new() }
    }

    pub fn from_real_fn(grid: &Arc<Grid<T>>, f: impl Fn(&[T]) -> T) -> Self {
        Self::from_fn(grid, |x| C::new(f(x), T::zero()))
    }

    /// Fill coefficients from a function of the frequency vector.
    pub fn from_spectrum_fn(grid: &Arc<Grid<T>>, f: impl Fn(&[T]) -> C<T>) -> Self {
        let d = grid.dim();
        let data: Vec<C<T>> = (0..grid.len()).map(|i| f(&grid.xi(i)[..d])).collect();
        Field { grid: grid.clone(), phys: OnceCell::new(), spec: OnceCell::from(data) }
    }

    /// Single Fourier mode `e^{iξ·x}` for an integer wavevector.
    pub fn plane_wave(grid: &Arc<Grid<T>>, m: [i64; 3]) -> Self {
        let mut data = vec![C::new(T::zero(), T::zero()); grid.len()];
        data[grid.flat_of_wavevector(m)] = C::new(T::one(), T::zero());
        Self::from_spectrum(grid, data).expect("length matches")
    }

    pub fn grid(&self) -> &Arc<Grid<T>> {
        &self.grid
    }

    pub fn repr(&self) -> Repr {
        match (self.phys.get().is_some(), self.spec.get().is_some()) {
            (true, true) => Repr::Both,
            (true, false) => Repr::Physical,
            _ => Repr::Frequency,
        }
    }

    pub fn physical(&self) -> &[C<T>] {
        self.phys.get_or_init(|| {
            let mut v = self.spec.get().expect("field has no data").clone();
            self.grid.inverse(&mut v);
            v
        })
    }

    pub fn spectrum(&self) -> &[C<T>] {
        self.spec.get_or_init(|| {
            let mut v = self.phys.get().expect("field has no data").clone();
            self.grid.forward(&mut v);
            v
        })
    }

    /// Mutable physical samples; drops the cached spectrum.
    pub fn physical_mut(&mut self) -> &mut Vec<C<T>> {
        self.physical();
        self.spec = OnceCell::new();
        self.phys.get_mut().expect("initialised above")
    }

    /// Mutable coefficients; drops the cached physical samples.
    pub fn spectrum_mut(&mut self) -> &mut Vec<C<T>> {
        self.spectrum();
        self.phys = OnceCell::new();
        self.spec.get_mut().expect("initialised above")
    }

    pub fn into_spectrum(self) -> Vec<C<T>> {
        self.spectrum();
        self.spec.into_inner().expect("initialised above")
    }

    pub fn into_physical(self) -> Vec<C<T>> {
        self.physical();
        self.phys.into_inner().expect("initialised above")
    }

    pub fn same_grid(&self, other: &Field<T>) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    pub fn check_grid(&self, other: &Field<T>) -> Result<(), SpectralError> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(SpectralError::GridMismatch)
        }
    }

    /// New field whose coefficients are `f(idx, c)`.
    pub fn map_spectrum(&self, f: impl Fn(usize, C<T>) -> C<T>) -> Self {
        let data: Vec<C<T>> = self.spectrum().iter().enumerate().map(|(i, &c)| f(i, c)).collect();
        Field { grid: self.grid.clone(), phys: OnceCell::new(), spec: OnceCell::from(data) }
    }

    /// New field whose samples are `f(idx, v)`.
    pub fn map_physical(&self, f: impl Fn(usize, C<T>) -> C<T>) -> Self {
        let data: Vec<C<T>> = self.physical().iter().enumerate().map(|(i, &c)| f(i, c)).collect();
        Field { grid: self.grid.clone(), phys: OnceCell::from(data), spec: OnceCell::new() }
    }

    fn zip_with(&self, other: &Field<T>, f: impl Fn(C<T>, C<T>) -> C<T>) -> Result<Self, SpectralError> {
        self.check_grid(other)?;
        if self.spec.get().is_some() && other.spec.get().is_some() {
            let data: Vec<C<T>> = self.spectrum().iter().zip(other.spectrum()).map(|(&a, &b)| f(a, b)).collect();
            return Self::from_spectrum(&self.grid, data);
        }
        let data: Vec<C<T>> = self.physical().iter().zip(other.physical()).map(|(&a, &b)| f(a, b)).collect();
        Self::from_physical(&self.grid, data)
    }

    pub fn add(&self, other: &Field<T>) -> Result<Self, SpectralError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field<T>) -> Result<Self, SpectralError> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: C<T>, other: &Field<T>) -> Result<Self, SpectralError> {
        self.zip_with(other, |a, b| a + s * b)
    }

    pub fn scale(&self, s: C<T>) -> Self {
        if self.spec.get().is_some() {
            self.map_spectrum(|_, c| c * s)
        } else {
            self.map_physical(|_, c| c * s)
        }
    }

    pub fn conj(&self) -> Self {
        self.map_physical(|_, c| c.conj())
    }

    pub fn re(&self) -> Self {
        self.map_physical(|_, c| C::new(c.re, T::zero()))
    }

    pub fn im(&self) -> Self {
        self.map_physical(|_, c| C::new(c.im, T::zero()))
    }

    /// Pointwise (aliased) product of physical samples.
    pub fn mul_pointwise(&self, other: &Field<T>) -> Result<Self, SpectralError> {
        self.check_grid(other)?;
        let data: Vec<C<T>> = self.physical().iter().zip(other.physical()).map(|(&a, &b)| a * b).collect();
        Self::from_physical(&self.grid, data)
    }

    /// Quadrature `L²` norm `(w Σ|f|²)^{1/2}`.
    pub fn norm_l2(&self) -> T {
        let s: T = self.physical().iter().map(|c| c.norm_sqr()).sum();
        (s * self.grid.weight()).sqrt()
    }

    /// Frequency-side `L²` norm `((2L)^d Σ|c_m|²)^{1/2}`.
    pub fn norm_l2_freq(&self) -> T {
        let s: T = self.spectrum().iter().map(|c| c.norm_sqr()).sum();
        (s * self.grid.volume()).sqrt()
    }

    pub fn norm_sup(&self) -> T {
        self.physical().iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// `⟨f, g⟩ = w Σ f conj(g)`.
    pub fn inner(&self, other: &Field<T>) -> Result<C<T>, SpectralError> {
        self.check_grid(other)?;
        let s = self
            .physical()
            .iter()
            .zip(other.physical())
            .fold(C::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b.conj());
        Ok(s * self.grid.weight())
    }

    /// Largest coefficient-wise distance, for comparing operator outputs.
    pub fn max_abs_diff(&self, other: &Field<T>) -> Result<T, SpectralError> {
        self.check_grid(other)?;
        Ok(self
            .physical()
            .iter()
            .zip(other.physical())
            .map(|(&a, &b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: &Arc<Grid<f64>>, seed: u64) -> Field<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<C<f64>> = (0..grid.len()).map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        Field::from_physical(grid, data).unwrap()
    }

    #[test]
    fn plane_wave_samples() {
        let g = make_grid::<f64>(1, 16, std::f64::consts::PI).unwrap();
        let f = Field::plane_wave(&g, [3, 0, 0]);
        for (i, v) in f.physical().iter().enumerate() {
            let x = g.position(i)[0];
            // Coefficients are relative to the first sample, so the mode carries a phase (-1)^m.
            let want = C::new((3.0 * (x + std::f64::consts::PI)).cos(), (3.0 * (x + std::f64::consts::PI)).sin());
            assert!((v - want).norm() < 1e-13);
        }
    }

    #[test]
    fn mutation_invalidates_cache() {
        let g = make_grid::<f64>(2, 8, 1.0).unwrap();
        let mut f = Field::plane_wave(&g, [1, 0, 0]);
        assert_eq!(f.repr(), Repr::Frequency);
        f.physical_mut()[0] = C::new(5.0, 0.0);
        assert_eq!(f.repr(), Repr::Physical);
        let c0 = f.spectrum()[0];
        assert!(c0.re > 0.0);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = make_grid::<f64>(1, 8, 1.0).unwrap();
        let b = make_grid::<f64>(1, 16, 1.0).unwrap();
        assert_eq!(Field::zeros(&a).add(&Field::zeros(&b)).unwrap_err(), SpectralError::GridMismatch);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn round_trip(seed in any::<u64>(), dim in 1usize..=3) {
            let n = if dim == 3 { 8 } else { 32 };
            let g = make_grid::<f64>(dim, n, 3.0).unwrap();
            let f = random_field(&g, seed);
            let back = Field::from_spectrum(&g, f.spectrum().to_vec()).unwrap();
            let scale = f.norm_sup();
            prop_assert!(back.max_abs_diff(&f).unwrap() <= 1e-12 * scale);
        }

        #[test]
        fn parseval(seed in any::<u64>(), dim in 1usize..=3) {
            let n = if dim == 3 { 16 } else { 32 };
            let g = make_grid::<f64>(dim, n, 5.0).unwrap();
            let f = random_field(&g, seed);
            let a = f.norm_l2();
            let b = f.norm_l2_freq();
            prop_assert!((a - b).abs() <= 1e-10 * a);
        }
    }
}

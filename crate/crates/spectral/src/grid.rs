//! Periodic box `[-L, L)^d` with its frequency lattice and FFT plans.

use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::SpectralError;
use crate::float::{Float, C};

/// Uniform periodic grid. Immutable after construction.
pub struct Grid<T: Float> {
    dim: usize,
    n: usize,
    half_len: T,
    xi_norm: Vec<T>,
    x_norm: Vec<T>,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
}

impl<T: Float> fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("dim", &self.dim)
            .field("n", &self.n)
            .field("half_len", &self.half_len)
            .finish()
    }
}

impl<T: Float> PartialEq for Grid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.n == other.n && self.half_len == other.half_len
    }
}

/// Build a grid, rejecting non-power-of-two `n < 8`, `d ∉ {1,2,3}` and `L <= 0`.
pub fn make_grid<T: Float>(dim: usize, n: usize, half_len: T) -> Result<Arc<Grid<T>>, SpectralError> {
    Grid::new(dim, n, half_len).map(Arc::new)
}

impl<T: Float> Grid<T> {
    pub fn new(dim: usize, n: usize, half_len: T) -> Result<Self, SpectralError> {
        if !(1..=3).contains(&dim) {
            return Err(SpectralError::Dimension(dim));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(SpectralError::PointsPerAxis(n));
        }
        if !(half_len > T::zero()) || !half_len.is_finite() {
            return Err(SpectralError::HalfLength(half_len.as_f64()));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let mut g = Grid { dim, n, half_len, xi_norm: Vec::new(), x_norm: Vec::new(), fwd, inv };
        let total = g.len();
        g.xi_norm = (0..total).map(|i| norm(&g.xi(i)[..dim])).collect();
        g.x_norm = (0..total).map(|i| norm(&g.position(i)[..dim])).collect();
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_len(&self) -> T {
        self.half_len
    }

    /// Total number of grid points `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Physical spacing `2L/n`.
    pub fn dx(&self) -> T {
        T::lit(2.0) * self.half_len / T::of_usize(self.n)
    }

    /// Frequency spacing `π/L`.
    pub fn dxi(&self) -> T {
        T::PI() / self.half_len
    }

    /// Quadrature weight `(2L/n)^d`.
    pub fn weight(&self) -> T {
        self.dx().powi(self.dim as i32)
    }

    /// Box volume `(2L)^d`.
    pub fn volume(&self) -> T {
        (T::lit(2.0) * self.half_len).powi(self.dim as i32)
    }

    /// Nyquist magnitude `πn/(2L)`.
    pub fn nyquist(&self) -> T {
        self.dxi() * T::of_usize(self.n / 2)
    }

    /// Largest band `k` with `2^{k+1}` not above the Nyquist magnitude.
    pub fn k_max(&self) -> i32 {
        (self.nyquist().log2().floor().to_i32().unwrap_or(0) - 1).max(-1)
    }

    /// Smallest band index whose low-pass `ψ_{≤k}` covers the whole lattice.
    pub fn k_top(&self) -> i32 {
        let rmax = self.nyquist() * T::of_usize(self.dim).sqrt();
        let mut k = -1;
        while T::lit(1.25) * T::lit(2f64.powi(k)) < rmax {
            k += 1;
        }
        k
    }

    /// Signed wavenumber of FFT index `i` along one axis, in `[-n/2, n/2)`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// FFT index along one axis for a signed wavenumber (taken mod `n`).
    #[inline]
    pub fn index_of(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    /// Per-axis indices of the flat index `idx` (row-major, last axis fastest).
    #[inline]
    pub fn multi_index(&self, idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut rest = idx;
        for a in (0..self.dim).rev() {
            out[a] = rest % self.n;
            rest /= self.n;
        }
        out
    }

    #[inline]
    pub fn flat_index(&self, mi: [usize; 3]) -> usize {
        let mut idx = 0;
        for &i in mi.iter().take(self.dim) {
            idx = idx * self.n + i;
        }
        idx
    }

    /// Signed wavenumber vector of a flat index.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> [i64; 3] {
        let mi = self.multi_index(idx);
        let mut m = [0i64; 3];
        for a in 0..self.dim {
            m[a] = self.wavenumber(mi[a]);
        }
        m
    }

    /// Flat index of a signed wavenumber vector, wrapping mod `n`.
    #[inline]
    pub fn flat_of_wavevector(&self, m: [i64; 3]) -> usize {
        let mut mi = [0usize; 3];
        for a in 0..self.dim {
            mi[a] = self.index_of(m[a]);
        }
        self.flat_index(mi)
    }

    /// Frequency `πm/L` at a flat index; unused axes are zero.
    #[inline]
    pub fn xi(&self, idx: usize) -> [T; 3] {
        let m = self.wavevector(idx);
        let mut out = [T::zero(); 3];
        for a in 0..self.dim {
            out[a] = self.dxi() * T::lit(m[a] as f64);
        }
        out
    }

    #[inline]
    pub fn xi_norm(&self, idx: usize) -> T {
        self.xi_norm[idx]
    }

    /// Physical point `-L + i·2L/n` at a flat index; unused axes are zero.
    #[inline]
    pub fn position(&self, idx: usize) -> [T; 3] {
        let mi = self.multi_index(idx);
        let mut out = [T::zero(); 3];
        for a in 0..self.dim {
            out[a] = -self.half_len + self.dx() * T::of_usize(mi[a]);
        }
        out
    }

    #[inline]
    pub fn x_norm(&self, idx: usize) -> T {
        self.x_norm[idx]
    }

    /// True when any axis sits on the Nyquist row `m = -n/2`.
    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let mi = self.multi_index(idx);
        mi.iter().take(self.dim).any(|&i| i == self.n / 2)
    }

    /// Largest retained wavenumber under the 2/3 rule.
    pub fn dealias_cut(&self) -> i64 {
        (self.n / 3) as i64
    }

    /// Whether the mode at `idx` survives 2/3-rule truncation.
    #[inline]
    pub fn dealias_keep(&self, idx: usize) -> bool {
        let cut = self.dealias_cut();
        let m = self.wavevector(idx);
        m.iter().take(self.dim).all(|&k| k.abs() <= cut)
    }

    /// Forward transform in place: coefficients `c_m = n^{-d} Σ_x f(x) e^{-2πi m·j/n}`.
    pub fn forward(&self, data: &mut [C<T>]) {
        self.transform(data, &self.fwd);
        let s = T::one() / T::of_usize(self.len());
        for v in data.iter_mut() {
            *v = *v * s;
        }
    }

    /// Inverse transform in place: `f(x) = Σ_m c_m e^{2πi m·j/n}`.
    pub fn inverse(&self, data: &mut [C<T>]) {
        self.transform(data, &self.inv);
    }

    fn transform(&self, data: &mut [C<T>], plan: &Arc<dyn Fft<T>>) {
        assert_eq!(data.len(), self.len(), "buffer does not match grid");
        let n = self.n;
        if self.dim == 1 {
            plan.process(data);
            return;
        }
        let mut line = vec![C::new(T::zero(), T::zero()); n];
        let mut scratch = vec![C::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            let block = stride * n;
            for base in (0..data.len()).step_by(block) {
                for off in 0..stride {
                    let start = base + off;
                    for (k, v) in line.iter_mut().enumerate() {
                        *v = data[start + k * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (k, v) in line.iter().enumerate() {
                        data[start + k * stride] = *v;
                    }
                }
            }
        }
    }
}

fn norm<T: Float>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
}

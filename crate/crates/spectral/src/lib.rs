//! Periodic grids, spectral fields, the cutoff family `ψ`, Littlewood-Paley
//! projectors, physical shells and the Klein-Gordon propagator `e^{±itΛ}`.

pub mod cutoff;
pub mod error;
pub mod field;
pub mod float;
pub mod grid;
pub mod ops;

pub use cutoff::{psi, psi_band, psi_interval, psi_le, Band, CutoffFamily};
pub use error::SpectralError;
pub use field::{Field, Repr};
pub use float::{cplx, expi, Float, C};
pub use grid::{make_grid, Grid};
pub use ops::{
    bernstein_ratio, dealias, derivative, even_multiplier, japanese, lambda_apply, laplacian, lp_project,
    multiplier, product_dealiased, q_cutoff, q_top, semigroup, Projector, Sign,
};

pub type Grid64 = Grid<f64>;
pub type Grid32 = Grid<f32>;
pub type Field64 = Field<f64>;
pub type Field32 = Field<f32>;
pub type C64 = C<f64>;

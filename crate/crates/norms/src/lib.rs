//! Sobolev, sup, weighted and dyadic norms, time-accumulated Strichartz
//! functionals, and the least-squares growth-law fits used by experiments.

pub mod fit;
pub mod localized;
pub mod spec;
pub mod strichartz;

pub use fit::{fit_loglog, fit_semilog, ols, Fit};
pub use localized::{interpolation_ratio, localized_estimates_check, LocalizedParams, LocalizedReport};
pub use spec::{
    dyadic_composite, dyadic_piece_max, holder_sup, lebesgue, norm, sandwich_constants, sobolev, weighted_l2, NormError,
    NormSpec, Sandwich,
};
pub use strichartz::StrichartzAccumulator;

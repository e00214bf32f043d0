//! Time integration of the quadratic quasilinear Klein-Gordon equation and the
//! diagnostics built on it: good unknown, reduced equation, normal form, scattering.

pub mod data;
pub mod error;
pub mod good;
pub mod normal_form;
pub mod residual;
pub mod scatter;
pub mod snapshot;
pub mod solver;
pub mod spec;
pub mod state;

pub use data::{data_norm, initial_data, DataShape};
pub use error::DynamicsError;
pub use good::{good_unknown, good_unknown_report, q_sup, GoodUnknownReport, Paralinear, Q_LIMIT};
pub use normal_form::{
    boundary_total, cubic_term, duhamel_check, normal_form_boundary, quadratic_from_kernels, quadratic_terms, CubicRoute,
    DuhamelConfig, DuhamelReport, Kernels, Linear, Quadrature, QuadraticTerm,
};
pub use residual::{
    project_off_zero, reduced_equation, reduced_equation_residual, refinement_study, ReducedEquation, RefinementStudy,
    ResidualReport,
};
pub use scatter::{scattering_limit, ScatteringReport, MIN_CHECKPOINTS};
pub use snapshot::{read_snapshot, write_snapshot};
pub use solver::{
    cfl_limit, linear_exact, log_schedule, nonlinearity, run_to_time, step, BlowUpCause, Monitor, RunConfig, RunRow,
    Target, Trajectory, Verdict,
};
pub use spec::{all_vars, LinearForm, NonlinearitySpec, Var};
pub use state::{profile, KGState, T0};

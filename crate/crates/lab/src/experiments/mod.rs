pub mod dynamics;
pub mod linear;
pub mod operators;
pub mod scan;

use crate::config::{ExperimentConfig, ExperimentId};
use crate::error::LabError;
use crate::report::RunReport;

/// Validate `cfg` and run its experiment.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport, LabError> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentId::DispersiveDecay => linear::dispersive_decay(cfg),
        ExperimentId::StrichartzGrowth => linear::strichartz_growth(cfg),
        ExperimentId::PhaseScan => scan::phase_scan(cfg),
        ExperimentId::MultiplierBounds => scan::multiplier_bounds(cfg),
        ExperimentId::ParadiffOracle => operators::paradiff_oracle(cfg),
        ExperimentId::OperatorIdentities => operators::operator_identities(cfg),
        ExperimentId::GoodUnknownScaling => dynamics::good_unknown_scaling(cfg),
        ExperimentId::ReducedResidual => dynamics::reduced_residual(cfg),
        ExperimentId::NormalForm => dynamics::normal_form(cfg),
        ExperimentId::LifespanSweep => dynamics::lifespan_sweep(cfg),
        ExperimentId::WeightedBootstrap => dynamics::weighted_bootstrap(cfg),
        ExperimentId::Scattering => dynamics::scattering(cfg),
    }
}

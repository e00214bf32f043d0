use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid nonlinearity: {0}")]
    Spec(String),
    #[error("time step {dt} exceeds the CFL limit {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("non-finite value at t = {t}")]
    NotFinite { t: f64 },
    #[error("|q| reaches {sup} > 1/2; the data are too large for the good unknown")]
    QBound { sup: f64 },
    #[error("state fields are not real-valued (imaginary part {0})")]
    NotReal(f64),
    #[error("need at least {need} checkpoints, got {got}")]
    Checkpoints { need: usize, got: usize },
    #[error("states are not consistent: {0}")]
    States(String),
    #[error("snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Spectral(#[from] kg_spectral::SpectralError),
    #[error(transparent)]
    Paradiff(#[from] kg_paradiff::ParadiffError),
    #[error(transparent)]
    Resonance(#[from] kg_resonance::ResonanceError),
    #[error(transparent)]
    Norm(#[from] kg_norms::NormError),
}

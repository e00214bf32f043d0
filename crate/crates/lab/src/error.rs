use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config: {0}")]
    Config(String),
    #[error("spectral: {0}")]
    Spectral(#[from] kg_spectral::SpectralError),
    #[error("paradiff: {0}")]
    Paradiff(#[from] kg_paradiff::ParadiffError),
    #[error("resonance: {0}")]
    Resonance(#[from] kg_resonance::ResonanceError),
    #[error("dynamics: {0}")]
    Dynamics(#[from] kg_dynamics::DynamicsError),
    #[error("norms: {0}")]
    Norms(#[from] kg_norms::NormError),
    #[error("fit: {0}")]
    Fit(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

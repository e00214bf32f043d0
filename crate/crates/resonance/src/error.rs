use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResonanceError {
    #[error("symbol `{0}` is singular on a reachable frequency pairing")]
    Singular(String),
    #[error("direct trilinear sum needs n^d <= 4096, got {0}")]
    TooLarge(usize),
    #[error("exponents violate the Hölder relation")]
    Exponents,
    #[error("band condition violated: {0}")]
    Bands(String),
    #[error("unknown symbol factor `{0}`")]
    Factor(String),
    #[error("scan parameters must be positive")]
    Scan,
    #[error(transparent)]
    Spectral(#[from] kg_spectral::SpectralError),
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParadiffError {
    #[error("symbol factor `{0}` has no declared value at zeta = 0")]
    OriginUndeclared(String),
    #[error("dense matrix needs n^d <= 4096, got {0}")]
    TooLarge(usize),
    #[error("error operator needs at least two symbols, got {0}")]
    TooFewSymbols(usize),
    #[error("unsupported Lebesgue exponent {0}; use 1, 2 or infinity")]
    Exponent(f64),
    #[error(transparent)]
    Spectral(#[from] kg_spectral::SpectralError),
}

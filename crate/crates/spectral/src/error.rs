use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("dimension must be 1, 2 or 3, got {0}")]
    Dimension(usize),
    #[error("points per axis must be a power of two and at least 8, got {0}")]
    PointsPerAxis(usize),
    #[error("half-length must be positive and finite, got {0}")]
    HalfLength(f64),
    #[error("band index must be at least -1, got {0}")]
    Band(i32),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("buffer length {got} does not match grid size {want}")]
    Length { got: usize, want: usize },
}

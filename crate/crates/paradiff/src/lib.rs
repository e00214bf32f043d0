//! Weyl paradifferential calculus on the periodic lattice: quantization of
//! separable symbols, the paraproduct remainder, composition errors and symbol norms.

pub mod error;
pub mod measure;
pub mod norm;
pub mod symbol;
pub mod weyl;

pub use error::ParadiffError;
pub use measure::{error_constant, quantization_constant, remainder_constant, x_gradient};
pub use norm::{derivative_count, symbol_norm, SymbolNorm};
pub use symbol::{Origin, Symbol, SymbolTerm, ZetaFn};
pub use weyl::{
    error_op, normalization, pair_weight, remainder, weyl_apply, weyl_matrix, WeylMatrix, MATRIX_LIMIT,
    PAIR_CUTOFF_SCALE,
};

pub type Symbol64 = Symbol<f64>;

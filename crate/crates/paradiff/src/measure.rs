//! Measured boundedness constants for `T_a`, `H` and `E`.

use kg_norms::{holder_sup, sobolev};
use kg_spectral::{Field, Float};

use crate::error::ParadiffError;
use crate::norm::symbol_norm;
use crate::symbol::Symbol;
use crate::weyl::{error_op, remainder, weyl_apply};

/// `max_f ‖T_a f‖_{H^s} / (‖a‖_{L^∞_m} ‖f‖_{H^{s+m}})`.
pub fn quantization_constant<T: Float>(a: &Symbol<T>, fs: &[Field<T>], s: f64) -> Result<f64, ParadiffError> {
    let Some(first) = fs.first() else { return Ok(0.0) };
    let m = a.order();
    let an = symbol_norm(a, first.grid(), f64::INFINITY, m)?.value;
    let mut worst: f64 = 0.0;
    for f in fs {
        let num = sobolev(&weyl_apply(a, f)?, T::lit(s)).as_f64();
        let den = an * sobolev(f, T::lit(s + m)).as_f64();
        if den > 0.0 {
            worst = worst.max(num / den);
        }
    }
    Ok(worst)
}

/// `max ‖H(f,g)‖_{H^s} / (‖f‖_{W^{m,∞}} ‖g‖_{H^{s-m}})`.
pub fn remainder_constant<T: Float>(pairs: &[(Field<T>, Field<T>)], s: f64, m: u32) -> Result<f64, ParadiffError> {
    let mut worst: f64 = 0.0;
    for (f, g) in pairs {
        let num = sobolev(&remainder(f, g)?, T::lit(s)).as_f64();
        let den = holder_sup(f, m).as_f64() * sobolev(g, T::lit(s - m as f64)).as_f64();
        if den > 0.0 {
            worst = worst.max(num / den);
        }
    }
    Ok(worst)
}

/// `max ‖E(a_1..a_n) f‖_{H^s} / (Π (‖a_j‖ + ‖∇_x a_j‖) ‖f‖_{H^{s+Σm_j-1}})`.
pub fn error_constant<T: Float>(symbols: &[Symbol<T>], fs: &[Field<T>], s: f64) -> Result<f64, ParadiffError> {
    let Some(first) = fs.first() else { return Ok(0.0) };
    let grid = first.grid();
    let mut prod = 1.0;
    let mut msum = 0.0;
    for a in symbols {
        let m = a.order();
        msum += m;
        let mut total = symbol_norm(a, grid, f64::INFINITY, m)?.value;
        for axis in 0..grid.dim() {
            total += symbol_norm(&x_gradient(a, axis), grid, f64::INFINITY, m)?.value;
        }
        prod *= total;
    }
    let mut worst: f64 = 0.0;
    for f in fs {
        let num = sobolev(&error_op(symbols, f)?, T::lit(s)).as_f64();
        let den = prod * sobolev(f, T::lit(s + msum - 1.0)).as_f64();
        if den > 0.0 {
            worst = worst.max(num / den);
        }
    }
    Ok(worst)
}

/// `∂_{x_axis} a`, term by term; constant x-factors drop out.
pub fn x_gradient<T: Float>(a: &Symbol<T>, axis: usize) -> Symbol<T> {
    let terms = a
        .terms()
        .iter()
        .filter_map(|t| {
            t.x.as_ref().map(|f| crate::symbol::SymbolTerm {
                x: Some(kg_spectral::derivative(f, axis)),
                zeta: t.zeta.clone(),
            })
        })
        .collect();
    Symbol::new(terms, a.order())
}

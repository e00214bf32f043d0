//! Symbol norms `sup_ζ (1+|ζ|)^{-m} ‖Σ_{|α|≤c} |ζ|^{|α|} |D^α_ζ a|‖_{L^p_x}`.

use kg_spectral::{Float, Grid, C};

use crate::error::ParadiffError;
use crate::symbol::{Origin, Symbol};

/// Number of ζ-derivatives in the symbol norm: `d + 2`.
pub fn derivative_count(dim: usize) -> usize {
    dim + 2
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolNorm {
    pub p: f64,
    pub order: f64,
    pub value: f64,
    pub derivatives: usize,
}

fn multi_indices(dim: usize, max: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    let lim = |a: usize| if a < dim { max } else { 0 };
    for i in 0..=lim(0) {
        for j in 0..=lim(1) {
            for k in 0..=lim(2) {
                if i + j + k <= max {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Stencil of the iterated central difference `δ^α` with step `h` (offsets in lattice units).
fn stencil(alpha: [usize; 3], dim: usize) -> Vec<([i64; 3], f64)> {
    let mut pts = vec![([0i64; 3], 1.0)];
    for a in 0..dim {
        let k = alpha[a];
        if k == 0 {
            continue;
        }
        let mut next = Vec::new();
        for (off, w) in &pts {
            for i in 0..=k {
                let mut o = *off;
                o[a] += k as i64 - 2 * i as i64;
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                next.push((o, w * sign * binomial(k, i) / 2f64.powi(k as i32)));
            }
        }
        pts = next;
    }
    pts
}

/// Symbol norm over every lattice frequency. Frequencies whose stencil meets an
/// excluded origin are skipped.
pub fn symbol_norm<T: Float>(a: &Symbol<T>, grid: &Grid<T>, p: f64, m: f64) -> Result<SymbolNorm, ParadiffError> {
    if !(p == 1.0 || p == 2.0 || p == f64::INFINITY) {
        return Err(ParadiffError::Exponent(p));
    }
    let d = grid.dim();
    let cd = derivative_count(d);
    let alphas = multi_indices(d, cd);
    let stencils: Vec<_> = alphas.iter().map(|al| stencil(*al, d)).collect();
    let h = grid.dxi().as_f64();
    let excluded = a.terms().iter().any(|t| t.zeta.origin() == Origin::Excluded);
    let xs: Vec<Option<Vec<C<T>>>> = a.terms().iter().map(|t| t.x.as_ref().map(|f| f.physical().to_vec())).collect();
    let npts = grid.len();
    let w = grid.weight().as_f64();
    let mut best: f64 = 0.0;
    let mut coeffs = vec![vec![C::new(0.0, 0.0); a.terms().len()]; alphas.len()];
    let mut weighted = vec![0.0f64; npts];
    for zi in 0..grid.len() {
        let m0 = grid.wavevector(zi);
        let mut skip = false;
        for (ai, st) in stencils.iter().enumerate() {
            for (ti, term) in a.terms().iter().enumerate() {
                let mut acc = C::new(0.0, 0.0);
                for (off, wgt) in st {
                    let mut z = [T::zero(); 3];
                    let mut at_origin = true;
                    for ax in 0..d {
                        let k = m0[ax] + off[ax];
                        at_origin &= k == 0;
                        z[ax] = grid.dxi() * T::lit(k as f64);
                    }
                    if at_origin && excluded {
                        skip = true;
                    }
                    let v = if at_origin {
                        match term.zeta.origin() {
                            Origin::Value(v) => v,
                            Origin::Excluded => C::new(T::zero(), T::zero()),
                        }
                    } else {
                        term.zeta.eval_unchecked(&z[..d])
                    };
                    acc += C::new(v.re.as_f64(), v.im.as_f64()) * *wgt;
                }
                let order: usize = alphas[ai].iter().sum();
                coeffs[ai][ti] = acc / h.powi(order as i32);
            }
        }
        if skip {
            continue;
        }
        let zn = grid.xi_norm(zi).as_f64();
        for (xi, slot) in weighted.iter_mut().enumerate() {
            let mut s = 0.0;
            for (ai, al) in alphas.iter().enumerate() {
                let mut v = C::new(0.0, 0.0);
                for (ti, x) in xs.iter().enumerate() {
                    let fx = x.as_ref().map_or(C::new(1.0, 0.0), |f| C::new(f[xi].re.as_f64(), f[xi].im.as_f64()));
                    v += fx * coeffs[ai][ti];
                }
                let order: usize = al.iter().sum();
                s += zn.powi(order as i32) * v.norm();
            }
            *slot = s;
        }
        let lp = if p == f64::INFINITY {
            weighted.iter().copied().fold(0.0, f64::max)
        } else if p == 1.0 {
            weighted.iter().sum::<f64>() * w
        } else {
            (weighted.iter().map(|v| v * v).sum::<f64>() * w).sqrt()
        };
        best = best.max((1.0 + zn).powf(-m) * lp);
    }
    Ok(SymbolNorm { p, order: m, value: best, derivatives: cd })
}

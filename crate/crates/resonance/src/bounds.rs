//! Randomized measurement of the multiplier constants for band-localized inputs.

use kg_norms::lebesgue;
use kg_spectral::{cplx, lp_project, Band, Field, Float, Grid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::error::ResonanceError;
use crate::pseudo::{bilinear_with, trilinear_with, Path};
use crate::symbols::{BilinearSymbol, TrilinearSymbol};

/// Which right-hand side a bilinear measurement is normalized by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Plain Hölder, factor 1.
    Unit,
    /// `m_𝒮` or `m_{𝒮₁}`: `2^{(2d+3) min(k₁,k₂)}`.
    Energy,
    /// `a_{μν}`: `2^{k₂}`.
    Quadratic,
    /// `Φ^{-1} m_𝒬`: `2^{(2d+4)k₁ + 2N k₂}`.
    PhaseQuartic { n: i32 },
    /// `Φ^{-1}_{μ-} m_𝒬` for `k₁ <= k₂ - 6`: `2^{k₁ + (2N-1)k₂}`.
    PhaseQuarticSplit { n: i32 },
    /// `Φ^{-1} a_{μν}`: `2^{(2d+3) min(k₁,k₂) + k₂}`.
    PhaseQuadratic,
}

impl BoundKind {
    /// `log₂` of the band factor, or an error when the bands are out of range.
    pub fn log2_factor(self, dim: usize, k1: i32, k2: i32) -> Result<f64, ResonanceError> {
        if k1 < -1 || k2 < -1 {
            return Err(ResonanceError::Bands(format!("band indices must be >= -1, got ({k1}, {k2})")));
        }
        let d = dim as f64;
        let (a, b) = (k1 as f64, k2 as f64);
        let lo = a.min(b);
        Ok(match self {
            BoundKind::Unit => 0.0,
            BoundKind::Energy => (2.0 * d + 3.0) * lo,
            BoundKind::Quadratic => b,
            BoundKind::PhaseQuartic { n } => (2.0 * d + 4.0) * a + 2.0 * n as f64 * b,
            BoundKind::PhaseQuarticSplit { n } => {
                if k1 > k2 - 6 {
                    return Err(ResonanceError::Bands(format!("needs k1 <= k2 - 6, got ({k1}, {k2})")));
                }
                a + (2.0 * n as f64 - 1.0) * b
            }
            BoundKind::PhaseQuadratic => (2.0 * d + 3.0) * lo + b,
        })
    }
}

/// Lebesgue exponents of output and inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Exponents {
    pub p: f64,
    pub inputs: Vec<f64>,
}

impl Exponents {
    pub fn new(p: f64, inputs: &[f64]) -> Result<Self, ResonanceError> {
        let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
        let ok = std::iter::once(p).chain(inputs.iter().copied()).all(|x| x >= 1.0);
        let sum: f64 = inputs.iter().map(|&q| inv(q)).sum();
        if !ok || (inv(p) - sum).abs() > 1e-12 {
            return Err(ResonanceError::Exponents);
        }
        Ok(Exponents { p, inputs: inputs.to_vec() })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Largest `‖output‖_p / (2^{factor} Π ‖input‖)` over the suite.
    pub constant: f64,
    pub log2_factor: f64,
    pub samples: usize,
    pub excluded: usize,
}

/// Complex coefficients uniform in the unit square on every mode, one tuple per sample.
pub fn random_suite<T: Float>(grid: &Arc<Grid<T>>, count: usize, arity: usize, seed: u64) -> Vec<Vec<Field<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..arity)
                .map(|_| {
                    let data = (0..grid.len())
                        .map(|_| cplx(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
                        .collect();
                    Field::from_spectrum(grid, data).expect("length matches grid")
                })
                .collect()
        })
        .collect()
}

fn ratio<T: Float>(out: &Field<T>, ins: &[Field<T>], exps: &Exponents, log2_factor: f64) -> Option<f64> {
    let denom: f64 = ins.iter().zip(&exps.inputs).map(|(f, &q)| lebesgue(f, q).as_f64()).product();
    if denom == 0.0 {
        return None;
    }
    Some(lebesgue(out, exps.p).as_f64() / (denom * 2f64.powf(log2_factor)))
}

fn finite(c: f64) -> Result<f64, ResonanceError> {
    if c.is_finite() {
        Ok(c)
    } else {
        Err(ResonanceError::Bands("measured constant is not finite".into()))
    }
}

/// Measure `‖B_m(P_{k₁}f, P_{k₂}g)‖_p / (2^{…}‖P_{k₁}f‖_q‖P_{k₂}g‖_r)` over `suite`.
///
/// With `out_band = Some(k)` the output is projected by `P_k` first.
pub fn multiplier_bound_measure<T: Float>(
    m: &BilinearSymbol<T>,
    kind: BoundKind,
    out_band: Option<i32>,
    (k1, k2): (i32, i32),
    exps: &Exponents,
    suite: &[Vec<Field<T>>],
) -> Result<BoundReport, ResonanceError> {
    if exps.inputs.len() != 2 {
        return Err(ResonanceError::Exponents);
    }
    let dim = suite.first().map(|s| s[0].grid().dim()).unwrap_or(1);
    let lf = kind.log2_factor(dim, k1, k2)?;
    let mut rep = BoundReport { constant: 0.0, log2_factor: lf, samples: 0, excluded: 0 };
    for s in suite {
        let f = lp_project(&s[0], Band::Single(k1))?;
        let g = lp_project(&s[1], Band::Single(k2))?;
        let out = bilinear_with(m, &f, &g, Path::Auto)?;
        rep.excluded += out.excluded;
        let o = match out_band {
            Some(k) => lp_project(&out.field, Band::Single(k))?,
            None => out.field,
        };
        if let Some(r) = ratio(&o, &[f, g], exps, lf) {
            rep.constant = rep.constant.max(finite(r)?);
            rep.samples += 1;
        }
    }
    Ok(rep)
}

/// `log₂` of the trilinear factor `2^{3 max + 2(k₁+k₂+k₃)}`.
pub fn trilinear_log2_factor(ks: (i32, i32, i32)) -> f64 {
    let (a, b, c) = ks;
    (3 * a.max(b).max(c) + 2 * (a + b + c)) as f64
}

pub fn trilinear_bound_measure<T: Float>(
    b: &TrilinearSymbol<T>,
    ks: (i32, i32, i32),
    exps: &Exponents,
    suite: &[Vec<Field<T>>],
) -> Result<BoundReport, ResonanceError> {
    if exps.inputs.len() != 3 {
        return Err(ResonanceError::Exponents);
    }
    if ks.0 < -1 || ks.1 < -1 || ks.2 < -1 {
        return Err(ResonanceError::Bands(format!("band indices must be >= -1, got {ks:?}")));
    }
    let lf = trilinear_log2_factor(ks);
    let mut rep = BoundReport { constant: 0.0, log2_factor: lf, samples: 0, excluded: 0 };
    for s in suite {
        let f = lp_project(&s[0], Band::Single(ks.0))?;
        let g = lp_project(&s[1], Band::Single(ks.1))?;
        let h = lp_project(&s[2], Band::Single(ks.2))?;
        let out = trilinear_with(b, &f, &g, &h, Path::Fast)?;
        rep.excluded += out.excluded;
        if let Some(r) = ratio(&out.field, &[f, g, h], exps, lf) {
            rep.constant = rep.constant.max(finite(r)?);
            rep.samples += 1;
        }
    }
    Ok(rep)
}

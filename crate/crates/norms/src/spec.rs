use kg_spectral::{derivative, lp_project, q_cutoff, q_top, Band, Field, Float};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormError {
    #[error("Sobolev index must be nonnegative, got {0}")]
    Sobolev(f64),
    #[error("weight exponent must lie in (0,1), got {0}")]
    Weight(f64),
    #[error("Strichartz exponent must be at least 2, got {0}")]
    Exponent(f64),
    #[error("time-integrated norms need an accumulator, not a single snapshot")]
    TimeIntegrated,
    #[error("checkpoint time {t} does not exceed previous checkpoint {last}")]
    NonMonotone { t: f64, last: f64 },
    #[error("invalid localized-estimate parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Spectral(#[from] kg_spectral::SpectralError),
}

/// Norm selector; `name()` is the CSV column header.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    Sobolev(f64),
    HolderSup(u32),
    WeightedL2(f64),
    DyadicComposite(f64),
    Strichartz { p: f64, weight: f64 },
}

impl NormSpec {
    pub fn validate(&self) -> Result<(), NormError> {
        match *self {
            NormSpec::Sobolev(s) if !(s >= 0.0) => Err(NormError::Sobolev(s)),
            NormSpec::WeightedL2(a) | NormSpec::DyadicComposite(a) if !(a > 0.0 && a < 1.0) => {
                Err(NormError::Weight(a))
            }
            NormSpec::Strichartz { p, .. } if !(p >= 2.0) => Err(NormError::Exponent(p)),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            NormSpec::Sobolev(s) => format!("sobolev_{s}"),
            NormSpec::HolderSup(m) => format!("holder_{m}"),
            NormSpec::WeightedL2(a) => format!("weightedL2_{a}"),
            NormSpec::DyadicComposite(a) => format!("dyadic_{a}"),
            NormSpec::Strichartz { p, weight } => format!("strichartz_p{p}_w{weight}"),
        }
    }
}

pub fn norm<T: Float>(f: &Field<T>, spec: NormSpec) -> Result<T, NormError> {
    spec.validate()?;
    Ok(match spec {
        NormSpec::Sobolev(s) => sobolev(f, T::lit(s)),
        NormSpec::HolderSup(m) => holder_sup(f, m),
        NormSpec::WeightedL2(a) => weighted_l2(f, T::lit(a)),
        NormSpec::DyadicComposite(a) => dyadic_composite(f, T::lit(a))?,
        NormSpec::Strichartz { .. } => return Err(NormError::TimeIntegrated),
    })
}

/// `‖f‖_{H^s} = ((2L)^d Σ ⟨ξ⟩^{2s} |c_ξ|²)^{1/2}`.
pub fn sobolev<T: Float>(f: &Field<T>, s: T) -> T {
    let g = f.grid();
    let sum: T = f
        .spectrum()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let r = g.xi_norm(i);
            (T::one() + r * r).powf(s) * c.norm_sqr()
        })
        .sum();
    (sum * g.volume()).sqrt()
}

/// `max_{|β|≤m} ‖∂^β f‖_∞` with spectral derivatives.
pub fn holder_sup<T: Float>(f: &Field<T>, m: u32) -> T {
    let d = f.grid().dim();
    let mut best = f.norm_sup();
    let mut layer = vec![f.clone()];
    for _ in 0..m {
        let mut next = Vec::new();
        for h in &layer {
            for a in 0..d {
                let dh = derivative(h, a);
                best = best.max(dh.norm_sup());
                next.push(dh);
            }
        }
        layer = next;
    }
    best
}

/// Quadrature `L^p` norm; `p = ∞` gives the sup over grid points.
pub fn lebesgue<T: Float>(f: &Field<T>, p: f64) -> T {
    if p == f64::INFINITY {
        return f.norm_sup();
    }
    let pt = T::lit(p);
    let sum: T = f.physical().iter().map(|c| c.norm().powf(pt)).sum();
    (sum * f.grid().weight()).powf(pt.recip())
}

/// `‖⟨x⟩^α f‖_{L²}` by quadrature.
pub fn weighted_l2<T: Float>(f: &Field<T>, alpha: T) -> T {
    let g = f.grid();
    let sum: T = f
        .physical()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let r = g.x_norm(i);
            (T::one() + r * r).powf(alpha) * c.norm_sqr()
        })
        .sum();
    (sum * g.weight()).sqrt()
}

fn pieces<T: Float>(f: &Field<T>, alpha: T) -> Result<Vec<Vec<T>>, NormError> {
    let g = f.grid();
    let mut out = Vec::new();
    for k in -1..=g.k_top() {
        let pk = lp_project(f, Band::Single(k))?;
        let mut row = Vec::new();
        for j in -1..=q_top(g) {
            let q = q_cutoff(&pk, j)?;
            row.push(T::lit(2f64.powi(j)).powf(alpha) * q.norm_l2());
        }
        out.push(row);
    }
    Ok(out)
}

/// `Σ_k (Σ_j 2^{2jα} ‖Q_j P_k f‖²)^{1/2}`.
pub fn dyadic_composite<T: Float>(f: &Field<T>, alpha: T) -> Result<T, NormError> {
    Ok(pieces(f, alpha)?.iter().map(|row| row.iter().map(|v| *v * *v).sum::<T>().sqrt()).sum())
}

/// `max_{j,k} 2^{jα} ‖Q_j P_k f‖`.
pub fn dyadic_piece_max<T: Float>(f: &Field<T>, alpha: T) -> Result<T, NormError> {
    Ok(pieces(f, alpha)?.iter().flatten().fold(T::zero(), |a, &b| a.max(b)))
}

/// Measured constants of the two-sided comparison between the weighted norm
/// and its dyadic pieces: `lower = max piece / weighted`, `upper = weighted / composite`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
}

pub fn sandwich_constants<T: Float>(f: &Field<T>, alpha: T) -> Result<Sandwich, NormError> {
    let w = weighted_l2(f, alpha);
    let pm = dyadic_piece_max(f, alpha)?;
    let comp = dyadic_composite(f, alpha)?;
    if w == T::zero() {
        return Ok(Sandwich { lower: 0.0, upper: 0.0 });
    }
    Ok(Sandwich { lower: (pm / w).as_f64(), upper: (w / comp).as_f64() })
}

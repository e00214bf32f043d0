//! The good unknown `𝒰 = w - iT_A u + iT_{√(1+q)}Λu` with `A = Q^{0j}ζ_j` and
//! `q = (Q^{jl} + Q^{0j}Q^{0l})ζ_jζ_l/Λ²`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use kg_norms::{holder_sup, sobolev};
use kg_paradiff::{weyl_apply, Symbol, ZetaFn};
use kg_spectral::{lambda_apply, lp_project, product_dealiased, Band, Field, Float, C};

use crate::error::DynamicsError;
use crate::solver::{coefficients, Coefficients, Jet};
use crate::spec::NonlinearitySpec;
use crate::state::KGState;

/// Largest `|q|` the good unknown accepts.
pub const Q_LIMIT: f64 = 0.5;

pub(crate) fn re<T: Float>(c: f64) -> C<T> {
    C::new(T::lit(c), T::zero())
}

pub(crate) fn im<T: Float>(c: f64) -> C<T> {
    C::new(T::zero(), T::lit(c))
}

/// `Σ_j f_j ζ_j`.
pub(crate) fn first_order<T: Float>(fs: &[Field<T>]) -> Symbol<T> {
    fs.iter()
        .enumerate()
        .fold(Symbol::zero(), |acc, (j, f)| acc.add(&Symbol::term(f.clone(), ZetaFn::component(j), 1.0)))
        .with_order(1.0)
}

/// `Σ_{jl} f_{jl} ζ_jζ_l/Λ²`.
pub(crate) fn angular<T: Float>(fs: &[Vec<Field<T>>]) -> Symbol<T> {
    let mut out = Symbol::zero();
    for (j, row) in fs.iter().enumerate() {
        for (l, f) in row.iter().enumerate() {
            let z = ZetaFn::component(j).mul(&ZetaFn::component(l)).mul(&ZetaFn::lambda_pow(-2.0));
            out = out.add(&Symbol::term(f.clone(), z, 0.0));
        }
    }
    out
}

pub(crate) fn lambda_symbol<T: Float>(s: f64) -> Symbol<T> {
    Symbol::from_zeta(ZetaFn::lambda_pow(s), s)
}

/// Power series `Σ c_k q^k` for `k ≥ 1`.
pub(crate) fn series<T: Float>(q: &Symbol<T>, coeffs: &[f64]) -> Result<Symbol<T>, DynamicsError> {
    let mut out = Symbol::zero();
    let mut pow = q.clone();
    for (k, &c) in coeffs.iter().enumerate() {
        if k > 0 {
            pow = pow.mul(q)?;
        }
        out = out.add(&pow.scale(re(c)));
    }
    Ok(out.with_order(0.0))
}

/// Taylor coefficients of `√(1+q) - 1` through `q³`.
pub const SQRT_SERIES: [f64; 3] = [0.5, -0.125, 0.0625];
/// Taylor coefficients of `(1+q)^{-1/2} - 1` through `q³`.
pub const INV_SQRT_SERIES: [f64; 3] = [-0.5, 0.375, -0.3125];

/// The paralinear symbols of one state.
#[derive(Debug, Clone)]
pub struct Paralinear<T: Float> {
    pub jet: Jet<T>,
    pub co: Coefficients<T>,
    /// `A = Q^{0j}ζ_j`.
    pub a: Symbol<T>,
    pub q: Symbol<T>,
    /// `√(1+q) - 1`, truncated after `q³`.
    pub sqrt_minus_one: Symbol<T>,
    pub q_sup: f64,
}

impl<T: Float> Paralinear<T> {
    pub fn new(state: &KGState<T>, spec: &NonlinearitySpec) -> Result<Self, DynamicsError> {
        spec.validate()?;
        if spec.dim != state.grid().dim() {
            return Err(DynamicsError::Spec(format!("spec is {}-dimensional, grid is {}", spec.dim, state.grid().dim())));
        }
        let jet = Jet::new(state);
        let co = coefficients(&jet, spec)?;
        let a = first_order(&co.q0);
        let aa = a.mul(&a)?.mul(&lambda_symbol(-2.0))?;
        let q = angular(&co.q).add(&aa).with_order(0.0);
        let sqrt_minus_one = series(&q, &SQRT_SERIES)?;
        let q_sup = q_sup(&co)?;
        Ok(Paralinear { jet, co, a, q, sqrt_minus_one, q_sup })
    }

    /// `√(1+q)`, truncated.
    pub fn sqrt(&self) -> Symbol<T> {
        Symbol::one().add(&self.sqrt_minus_one)
    }

    /// `w - iT_A u + iT_{√(1+q)}Λu`.
    pub fn good_unknown(&self) -> Result<Field<T>, DynamicsError> {
        let lu = lambda_apply(&self.jet.u, T::one());
        let ta = weyl_apply(&self.a, &self.jet.u)?;
        let ts = weyl_apply(&self.sqrt(), &lu)?;
        Ok(self.jet.w.axpy(im(-1.0), &ta)?.axpy(im(1.0), &ts)?)
    }

    pub fn check_q(&self) -> Result<(), DynamicsError> {
        if self.q_sup > Q_LIMIT {
            return Err(DynamicsError::QBound { sup: self.q_sup });
        }
        Ok(())
    }
}

/// `sup_{x,ζ} |q|`: the largest spectral radius over `x` of `Q^{jl} + Q^{0j}Q^{0l}`.
pub fn q_sup<T: Float>(co: &Coefficients<T>) -> Result<f64, DynamicsError> {
    let d = co.q0.len();
    if d == 0 {
        return Ok(0.0);
    }
    let grid = co.q0[0].grid().clone();
    let mut m = vec![vec![Vec::new(); d]; d];
    for j in 0..d {
        for l in 0..d {
            let qq = product_dealiased(&co.q0[j], &co.q0[l])?;
            m[j][l] = co.q[j][l].add(&qq)?.physical().iter().map(|c| c.re.as_f64()).collect::<Vec<f64>>();
        }
    }
    let mut sup: f64 = 0.0;
    for x in 0..grid.len() {
        let mat = DMatrix::from_fn(d, d, |j, l| 0.5 * (m[j][l][x] + m[l][j][x]));
        let rho = mat.symmetric_eigenvalues().iter().fold(0.0_f64, |r, v| r.max(v.abs()));
        sup = sup.max(rho);
    }
    Ok(sup)
}

pub fn good_unknown<T: Float>(state: &KGState<T>, spec: &NonlinearitySpec) -> Result<Field<T>, DynamicsError> {
    let p = Paralinear::new(state, spec)?;
    p.check_q()?;
    p.good_unknown()
}

/// `P_{≥0}(𝒰 - U)` against the quadratic bound `‖U‖_{W^{3,∞}}‖U‖_{H^N}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodUnknownReport {
    pub diff_hn: f64,
    pub w3inf: f64,
    pub hn: f64,
    pub ratio: f64,
    pub q_sup: f64,
}

pub fn good_unknown_report<T: Float>(
    state: &KGState<T>,
    spec: &NonlinearitySpec,
    regularity: f64,
) -> Result<GoodUnknownReport, DynamicsError> {
    let p = Paralinear::new(state, spec)?;
    p.check_q()?;
    let g = state.grid();
    let big_u = state.big_u();
    let diff = lp_project(&p.good_unknown()?.sub(&big_u)?, Band::Interval(0, g.k_top()))?;
    let s = T::lit(regularity);
    let diff_hn = sobolev(&diff, s).as_f64();
    let w3inf = holder_sup(&big_u, 3).as_f64();
    let hn = sobolev(&big_u, s).as_f64();
    let bound = w3inf * hn;
    let ratio = if bound > 0.0 { diff_hn / bound } else { 0.0 };
    Ok(GoodUnknownReport { diff_hn, w3inf, hn, ratio, q_sup: p.q_sup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use kg_spectral::make_grid;

    fn state(eps: f64) -> KGState<f64> {
        let g = make_grid(1, 32, 8.0).unwrap();
        let u = Field::from_real_fn(&g, |x| eps * (0.3 + (std::f64::consts::PI * x[0] / 8.0).cos()));
        let w = Field::from_real_fn(&g, |x| eps * (std::f64::consts::PI * x[0] / 4.0).sin());
        KGState::new(1.0, u, w).unwrap()
    }

    #[test]
    fn linear_spec_gives_projected_unknown() {
        let st = state(0.1);
        let spec = NonlinearitySpec::zero(1);
        let gu = good_unknown(&st, &spec).unwrap();
        // T_1 drops the zero mode and the Nyquist row of Λu.
        let lu = lambda_apply(&st.u, 1.0);
        let expect = st.w.axpy(im(1.0), &weyl_apply(&Symbol::one(), &lu).unwrap()).unwrap();
        assert!(gu.max_abs_diff(&expect).unwrap() < 1e-14);
    }

    #[test]
    fn q_sup_of_constant_coefficients() {
        // Q^{0j} = αu, Q^{jl} = βu: at a point with u = c the eigenvalue is βc + α²c².
        let g = make_grid(2, 8, 3.0).unwrap();
        let u = Field::from_real_fn(&g, |_| 0.2);
        let st = KGState::new(1.0, u.clone(), Field::zeros(&g)).unwrap();
        let spec = NonlinearitySpec::standard(2, 1.0, 0.5, 0.0, 0.0);
        let p = Paralinear::new(&st, &spec).unwrap();
        // Q^{jl} + Q^{0j}Q^{0l} = 0.1 δ + 0.04 (1 1; 1 1): eigenvalues 0.1 and 0.18.
        assert!((p.q_sup - 0.18).abs() < 1e-12, "{}", p.q_sup);
    }

    #[test]
    fn large_data_rejected() {
        let st = state(3.0);
        let err = good_unknown(&st, &NonlinearitySpec::default_instance(1)).unwrap_err();
        assert!(matches!(err, DynamicsError::QBound { .. }));
    }

    #[test]
    fn difference_is_quadratic() {
        let spec = NonlinearitySpec::default_instance(1);
        let r1 = good_unknown_report(&state(1e-2), &spec, 4.0).unwrap();
        let r2 = good_unknown_report(&state(5e-3), &spec, 4.0).unwrap();
        let slope = (r1.diff_hn / r2.diff_hn).log2();
        assert!((slope - 2.0).abs() < 0.05, "{slope}");
    }
}

//! Residual of the reduced equation
//! `(∂_t - iT_{A+√(1+q)Λ})𝒰 = 𝒮 + 𝒬 + 𝒞`
//! with the time derivative taken by a centred difference of the numerical flow.
//!
//! `∂_t Q = ℱ₁ + ℱ₂` splits each coefficient derivative into its linear part and
//! `c_{∂_t u}·F`. In the `q`-derivative slots `ℱ₁` and `ℱ₂` stand for the linear
//! and quadratic parts of `½∂_t q`.

use serde::{Deserialize, Serialize};

use kg_paradiff::{error_op, remainder, weyl_apply, Symbol, ZetaFn};
use kg_spectral::{lambda_apply, multiplier, product_dealiased, Field, Float, C};

use crate::error::DynamicsError;
use crate::good::{angular, first_order, im, lambda_symbol, re, series, Paralinear, INV_SQRT_SERIES};
use crate::solver::{add_scaled, form_with, linear_part, nonlinearity_of};
use crate::spec::{NonlinearitySpec, Var};
use crate::state::KGState;

/// Drop the zero mode and (through the multiplier) the Nyquist row, which no paraproduct reaches.
pub fn project_off_zero<T: Float>(f: &Field<T>) -> Field<T> {
    let g = f.grid().clone();
    multiplier(f, |i| if g.wavevector(i) == [0, 0, 0] { C::new(T::zero(), T::zero()) } else { C::new(T::one(), T::zero()) })
}

/// Fields of one reduced-equation evaluation.
#[derive(Debug, Clone)]
pub struct ReducedEquation<T: Float> {
    pub lhs: Field<T>,
    pub s: Field<T>,
    pub q: Field<T>,
    pub c: Field<T>,
}

impl<T: Float> ReducedEquation<T> {
    /// `Π(lhs - 𝒮 - 𝒬 - 𝒞)`.
    pub fn residual(&self) -> Result<Field<T>, DynamicsError> {
        let r = self.lhs.sub(&self.s)?.sub(&self.q)?.sub(&self.c)?;
        Ok(project_off_zero(&r))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub t: f64,
    pub h: f64,
    /// `‖Π(lhs - 𝒮 - 𝒬 - 𝒞)‖_{L²}`.
    pub residual: f64,
    pub lhs: f64,
    pub s: f64,
    pub q: f64,
    pub c: f64,
    pub q_sup: f64,
}

struct TimeDerivatives<T: Float> {
    /// Linear parts of `∂_t Q^{0j}`, `∂_t Q^{jl}`.
    lin0: Vec<Field<T>>,
    lin: Vec<Vec<Field<T>>>,
    /// Quadratic parts.
    quad0: Vec<Field<T>>,
    quad: Vec<Vec<Field<T>>>,
}

fn time_derivatives<T: Float>(
    p: &Paralinear<T>,
    spec: &NonlinearitySpec,
    f: &Field<T>,
) -> Result<TimeDerivatives<T>, DynamicsError> {
    let zero = Field::zeros(p.jet.u.grid());
    let dtw = linear_part(&p.jet.u);
    let pick = |v: Var| match v {
        Var::U => &p.jet.w,
        Var::Dt => &dtw,
        Var::Dx(j) => &p.jet.dw[j],
    };
    let quad_of = |c: f64| f.scale(re(c));
    let lin0 = spec.q0.iter().map(|fm| form_with(fm, &zero, pick)).collect::<Result<Vec<_>, _>>()?;
    let quad0 = spec.q0.iter().map(|fm| quad_of(fm.coeff(Var::Dt))).collect();
    let mut lin = Vec::new();
    let mut quad = Vec::new();
    for row in &spec.q {
        lin.push(row.iter().map(|fm| form_with(fm, &zero, pick)).collect::<Result<Vec<_>, _>>()?);
        quad.push(row.iter().map(|fm| quad_of(fm.coeff(Var::Dt))).collect());
    }
    Ok(TimeDerivatives { lin0, lin, quad0, quad })
}

fn check_spacing<T: Float>(prev: &KGState<T>, mid: &KGState<T>, next: &KGState<T>) -> Result<T, DynamicsError> {
    prev.u.check_grid(&mid.u)?;
    mid.u.check_grid(&next.u)?;
    let (h1, h2) = (mid.t - prev.t, next.t - mid.t);
    if !(h1 > T::zero()) || (h1 - h2).abs() > T::lit(1e-9) * h1 {
        return Err(DynamicsError::States(format!(
            "times {}, {}, {} are not equally spaced",
            prev.t.as_f64(),
            mid.t.as_f64(),
            next.t.as_f64()
        )));
    }
    Ok(h1)
}

/// Both sides of the reduced equation at `mid.t`.
pub fn reduced_equation<T: Float>(
    prev: &KGState<T>,
    mid: &KGState<T>,
    next: &KGState<T>,
    spec: &NonlinearitySpec,
) -> Result<ReducedEquation<T>, DynamicsError> {
    let h = check_spacing(prev, mid, next)?;
    let p = Paralinear::new(mid, spec)?;
    p.check_q()?;
    let d = spec.dim;
    let grid = mid.grid().clone();
    let f = nonlinearity_of(&p.jet, &p.co, spec)?;
    let dq = time_derivatives(&p, spec, &f)?;
    let w = &p.jet.w;
    let lu = lambda_apply(&p.jet.u, T::one());
    let lam = lambda_symbol::<T>(1.0);
    let lam_inv = lambda_symbol::<T>(-1.0);
    let t = |a: &Symbol<T>, g: &Field<T>| weyl_apply(a, g);
    let e = |s: &[Symbol<T>], g: &Field<T>| error_op(s, g);
    let x = |g: &Field<T>| Symbol::from_x(g.clone());

    // lhs = ∂_t𝒰 - iT_{A+√(1+q)Λ}𝒰
    let up = Paralinear::new(prev, spec)?.good_unknown()?;
    let un = Paralinear::new(next, spec)?.good_unknown()?;
    let um = p.good_unknown()?;
    let dudt = un.sub(&up)?.scale(re(0.5 / h.as_f64()));
    let transport = p.a.add(&p.sqrt().mul(&lam)?);
    let lhs = dudt.axpy(im(-1.0), &t(&transport, &um)?)?;

    // 𝒮
    let mut s = crate::solver::source(&p.jet, spec)?;
    for j in 0..d {
        if !spec.q0[j].is_zero() {
            add_scaled(&mut s, re(2.0), &remainder(&p.co.q0[j], &p.jet.dw[j])?)?;
        }
        for l in 0..d {
            if !spec.q[j][l].is_zero() {
                add_scaled(&mut s, re(1.0), &remainder(&p.co.q[j][l], &p.jet.ddu[j][l])?)?;
            }
        }
    }

    let half_q = p.q.scale(re(0.5));
    let a1 = first_order(&dq.lin0);
    let a2 = first_order(&dq.quad0);
    let g1 = angular(&dq.lin).scale(re(0.5));
    let mut cross = Vec::with_capacity(d);
    for j in 0..d {
        let dtq = dq.lin0[j].add(&dq.quad0[j])?;
        cross.push((0..d).map(|l| product_dealiased(&dtq, &p.co.q0[l])).collect::<Result<Vec<_>, _>>()?);
    }
    let g2 = angular(&dq.quad).scale(re(0.5)).add(&angular(&cross));

    // 𝒬
    let mut q = Field::zeros(&grid);
    for j in 0..d {
        if !spec.q0[j].is_zero() {
            add_scaled(&mut q, re(2.0), &t(&x(&p.jet.dw[j]), &p.co.q0[j])?)?;
            let zj = Symbol::from_zeta(ZetaFn::component(j), 1.0);
            add_scaled(&mut q, im(2.0), &e(&[x(&p.co.q0[j]), zj], w)?)?;
        }
        for l in 0..d {
            if !spec.q[j][l].is_zero() {
                add_scaled(&mut q, re(1.0), &t(&x(&p.jet.ddu[j][l]), &p.co.q[j][l])?)?;
                let z = ZetaFn::component(j).mul(&ZetaFn::component(l)).mul(&ZetaFn::lambda_pow(-1.0));
                add_scaled(&mut q, re(-1.0), &e(&[x(&p.co.q[j][l]), Symbol::from_zeta(z, 1.0)], &lu)?)?;
            }
        }
    }
    add_scaled(&mut q, im(-1.0), &t(&a1.mul(&lam_inv)?, &lu)?)?;
    add_scaled(&mut q, im(1.0), &t(&g1, &lu)?)?;
    add_scaled(&mut q, im(-1.0), &e(&[a1.clone(), lam_inv.clone()], &lu)?)?;
    add_scaled(&mut q, im(1.0), &e(&[half_q.clone(), lam.clone()], w)?)?;
    add_scaled(&mut q, re(-1.0), &e(&[lam.clone(), p.a.clone(), lam_inv.clone()], &lu)?)?;
    add_scaled(&mut q, re(1.0), &e(&[lam.clone(), half_q.clone()], &lu)?)?;

    // 𝒞
    let sm1 = &p.sqrt_minus_one;
    let tail = sm1.add(&half_q.scale(re(-1.0)));
    let sm1_lam = sm1.mul(&lam)?;
    let inv_sqrt_m1 = series(&p.q, &INV_SQRT_SERIES)?;
    let inv_sqrt = Symbol::one().add(&inv_sqrt_m1);
    let mut c = Field::zeros(&grid);
    add_scaled(&mut c, re(-1.0), &e(&[p.a.clone(), p.a.clone(), lam_inv.clone()], &lu)?)?;
    add_scaled(&mut c, im(1.0), &e(&[tail.clone(), lam.clone()], w)?)?;
    add_scaled(&mut c, re(1.0), &e(&[p.a.clone(), sm1.clone()], &lu)?)?;
    add_scaled(&mut c, re(-1.0), &e(&[sm1_lam.clone(), p.a.clone(), lam_inv.clone()], &lu)?)?;
    add_scaled(&mut c, re(1.0), &e(&[sm1_lam, sm1.clone()], &lu)?)?;
    add_scaled(&mut c, re(1.0), &e(&[lam.clone(), tail], &lu)?)?;
    add_scaled(&mut c, im(-1.0), &t(&a2.mul(&lam_inv)?, &lu)?)?;
    add_scaled(&mut c, im(-1.0), &e(&[a2, lam_inv], &lu)?)?;
    let g = inv_sqrt_m1.mul(&g1)?.add(&inv_sqrt.mul(&g2)?);
    add_scaled(&mut c, im(1.0), &t(&g, &lu)?)?;

    Ok(ReducedEquation { lhs, s, q, c })
}

pub fn reduced_equation_residual<T: Float>(
    prev: &KGState<T>,
    mid: &KGState<T>,
    next: &KGState<T>,
    spec: &NonlinearitySpec,
) -> Result<ResidualReport, DynamicsError> {
    let eq = reduced_equation(prev, mid, next, spec)?;
    let n = |f: &Field<T>| project_off_zero(f).norm_l2().as_f64();
    let q_sup = Paralinear::new(mid, spec)?.q_sup;
    Ok(ResidualReport {
        t: mid.t.as_f64(),
        h: (mid.t - prev.t).as_f64(),
        residual: eq.residual()?.norm_l2().as_f64(),
        lhs: n(&eq.lhs),
        s: n(&eq.s),
        q: n(&eq.q),
        c: n(&eq.c),
        q_sup,
    })
}

/// Residuals at the fixed time `t₀ + h₀` with spacings `h₀/2^k`, plus the Richardson
/// combination `(4r(h/2) - r(h))/3` of consecutive residual fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub t: f64,
    pub spacings: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Entry `k` combines levels `k` and `k + 1`.
    pub extrapolated: Vec<f64>,
    pub q_sup: f64,
}

impl RefinementStudy {
    /// Ratios `r(h)/r(h/2)`.
    pub fn ratios(&self) -> Vec<f64> {
        self.residuals.windows(2).map(|w| w[0] / w[1]).collect()
    }

    /// Plateau of the extrapolated residual: its smallest value.
    pub fn floor(&self) -> f64 {
        self.extrapolated.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Ratios of the halvings whose finer residual still sits above `margin × floor`.
    pub fn pre_floor_ratios(&self, margin: f64) -> Vec<f64> {
        let cut = margin * self.floor();
        self.residuals.windows(2).filter(|w| w[1] > cut).map(|w| w[0] / w[1]).collect()
    }
}

pub fn refinement_study<T: Float>(
    initial: &KGState<T>,
    spec: &NonlinearitySpec,
    h0: f64,
    levels: usize,
) -> Result<RefinementStudy, DynamicsError> {
    let mut fields: Vec<Field<T>> = Vec::with_capacity(levels);
    let mut spacings = Vec::with_capacity(levels);
    let mut q_sup: f64 = 0.0;
    for k in 0..levels {
        let m = 1usize << k;
        let h = T::lit(h0 / m as f64);
        let mut st = initial.clone();
        for _ in 0..m - 1 {
            st = crate::solver::step(&st, spec, h)?;
        }
        let mid = crate::solver::step(&st, spec, h)?;
        let next = crate::solver::step(&mid, spec, h)?;
        q_sup = q_sup.max(Paralinear::new(&mid, spec)?.q_sup);
        fields.push(reduced_equation(&st, &mid, &next, spec)?.residual()?);
        spacings.push(h.as_f64());
    }
    let residuals = fields.iter().map(|f| f.norm_l2().as_f64()).collect();
    let extrapolated = fields
        .windows(2)
        .map(|w| {
            let r = w[1].scale(re(4.0 / 3.0)).axpy(re(-1.0 / 3.0), &w[0])?;
            Ok(r.norm_l2().as_f64())
        })
        .collect::<Result<_, DynamicsError>>()?;
    Ok(RefinementStudy { t: initial.t.as_f64() + h0, spacings, residuals, extrapolated, q_sup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{initial_data, DataShape};
    use crate::solver::{max_japanese, step};
    use kg_spectral::make_grid;

    #[test]
    fn linear_residual_is_differencing_error() {
        let g = make_grid(1, 32, 8.0).unwrap();
        let spec = NonlinearitySpec::zero(1);
        let s0 = initial_data(&g, DataShape::Band { radius: 3.0, with_mean: true }, 4.0, 0.1, 5);
        let lmax = max_japanese(&g);
        for h in [0.02, 0.01] {
            let s1 = step(&s0, &spec, h).unwrap();
            let s2 = step(&s1, &spec, h).unwrap();
            let r = reduced_equation_residual(&s0, &s1, &s2, &spec).unwrap();
            // |Λ - sin(Λh)/h| ≤ Λ³h²/6 on every mode.
            let bound = lmax * lmax * h * h / 6.0 * s1.big_u().norm_l2() * 1.01;
            assert!(r.residual <= bound, "{} > {bound}", r.residual);
            assert_eq!(r.q, 0.0);
            assert_eq!(r.c, 0.0);
        }
    }

    #[test]
    fn unequal_spacing_rejected() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let spec = NonlinearitySpec::zero(1);
        let s0 = KGState::<f64>::zeros(&g, 1.0);
        let s1 = step(&s0, &spec, 0.01).unwrap();
        let s2 = step(&s1, &spec, 0.02).unwrap();
        assert!(matches!(reduced_equation_residual(&s0, &s1, &s2, &spec), Err(DynamicsError::States(_))));
    }
}

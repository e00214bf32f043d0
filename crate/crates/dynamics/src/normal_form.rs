//! Bilinear kernels `a_{μν}` of the nonlinearity in the unknowns `U_±`, the
//! normal-form boundary term and the cubic term of the profile equation
//!
//! `V(t) - V(1) = -iΣ e^{-isΛ}B_{Φ⁻¹a_{μν}}(U_μ, U_ν)|₁ᵗ
//!              + iΣ ∫₁ᵗ e^{-isΛ}[B_{Φ⁻¹a_{μν}}(F, U_ν) + B_{Φ⁻¹a_{μν}}(U_μ, F)] ds`.
//!
//! Kernels take `(ξ₁, ξ₂) = (ξ-η, η)`; slot 1 carries the coefficient factor of
//! each product and slot 2 the derivative factor.

use serde::{Deserialize, Serialize};

use kg_resonance::{
    bilinear_with, family_a, family_phase_a, phase_inverse, trilinear_with, ASymbol, AFactor, BilinearSymbol, Path,
    SignPair, SignTriple, SingularPolicy, TrilinearSymbol,
};
use kg_spectral::{semigroup, Field, Float, Sign, C};

use crate::error::DynamicsError;
use crate::good::{im, re};
use crate::solver::step;
use crate::spec::{NonlinearitySpec, Var};
use crate::state::KGState;

/// A linear quantity of `(u, w)` entering a quadratic product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Linear {
    Var(Var),
    /// `∂_j w`.
    Dw(usize),
    /// `∂²_{jl} u`.
    Ddu(usize, usize),
}

impl Linear {
    /// Multiplier of the quantity on `U_μ` at frequency `k`:
    /// `u ↦ -iμ/(2Λ)`, `w ↦ 1/2`, `∂_j u ↦ μk_j/(2Λ)`, `∂_j w ↦ ik_j/2`, `∂²_{jl}u ↦ iμk_jk_l/(2Λ)`.
    pub fn multiplier(self, sign: Sign, k: &[f64]) -> C<f64> {
        let mu = sign.value::<f64>();
        let lam = (1.0 + k.iter().map(|v| v * v).sum::<f64>()).sqrt();
        match self {
            Linear::Var(Var::U) => C::new(0.0, -mu / (2.0 * lam)),
            Linear::Var(Var::Dt) => C::new(0.5, 0.0),
            Linear::Var(Var::Dx(j)) => C::new(mu * k[j] / (2.0 * lam), 0.0),
            Linear::Dw(j) => C::new(0.0, k[j] / 2.0),
            Linear::Ddu(j, l) => C::new(0.0, mu * k[j] * k[l] / (2.0 * lam)),
        }
    }

    fn factor(self, slot: usize, sign: Sign) -> Result<(C<f64>, Vec<AFactor>), DynamicsError> {
        let mu = sign.value::<f64>();
        let out = match (slot, self) {
            (1, Linear::Var(Var::U)) => (C::new(0.0, -mu / 2.0), vec![AFactor::InvLambdaDiff]),
            (1, Linear::Var(Var::Dt)) | (2, Linear::Var(Var::Dt)) => (C::new(0.5, 0.0), vec![AFactor::One]),
            (1, Linear::Var(Var::Dx(l))) => (C::new(mu / 2.0, 0.0), vec![AFactor::DiffOverLambda(l)]),
            (2, Linear::Var(Var::U)) => (C::new(0.0, -mu / 2.0), vec![AFactor::InvLambdaEta]),
            (2, Linear::Var(Var::Dx(j))) => (C::new(mu / 2.0, 0.0), vec![AFactor::Eta(j), AFactor::InvLambdaEta]),
            (2, Linear::Dw(j)) => (C::new(0.0, 0.5), vec![AFactor::Eta(j)]),
            (2, Linear::Ddu(j, l)) => (C::new(0.0, mu / 2.0), vec![AFactor::EtaEtaOverLambda(j, l)]),
            _ => return Err(DynamicsError::Spec(format!("{self:?} has no kernel factor in slot {slot}"))),
        };
        Ok(out)
    }
}

/// `coeff · left · right`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticTerm {
    pub coeff: f64,
    pub left: Linear,
    pub right: Linear,
}

/// `F` expanded into products of linear quantities.
pub fn quadratic_terms(spec: &NonlinearitySpec) -> Vec<QuadraticTerm> {
    let mut out = Vec::new();
    for (j, form) in spec.q0.iter().enumerate() {
        for &(v, c) in &form.terms {
            out.push(QuadraticTerm { coeff: 2.0 * c, left: Linear::Var(v), right: Linear::Dw(j) });
        }
    }
    for (j, row) in spec.q.iter().enumerate() {
        for (l, form) in row.iter().enumerate() {
            for &(v, c) in &form.terms {
                out.push(QuadraticTerm { coeff: c, left: Linear::Var(v), right: Linear::Ddu(j, l) });
            }
        }
    }
    for &(a, b, c) in &spec.s {
        out.push(QuadraticTerm { coeff: c, left: Linear::Var(a), right: Linear::Var(b) });
    }
    out.retain(|t| t.coeff != 0.0);
    out
}

/// `a_{μν}` for the four sign pairs, in [`SignPair::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernels {
    pub a: Vec<(SignPair, ASymbol)>,
}

fn sign_index(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

impl Kernels {
    pub fn derive(spec: &NonlinearitySpec) -> Result<Self, DynamicsError> {
        spec.validate()?;
        let terms = quadratic_terms(spec);
        let mut a = Vec::with_capacity(4);
        for signs in SignPair::ALL {
            let mut sym = ASymbol { terms: Vec::new() };
            for t in &terms {
                let (c1, f1) = t.left.factor(1, signs.0)?;
                let (c2, f2) = t.right.factor(2, signs.1)?;
                let mut fs = f1;
                fs.extend(f2);
                sym.terms.push((c1 * c2 * t.coeff, fs));
            }
            a.push((signs, sym));
        }
        Ok(Kernels { a })
    }

    pub fn get(&self, signs: SignPair) -> &ASymbol {
        let i = 2 * sign_index(signs.0) + sign_index(signs.1);
        &self.a[i].1
    }

    pub fn eval(&self, signs: SignPair, x1: &[f64], x2: &[f64]) -> C<f64> {
        self.get(signs).eval(x1, x2)
    }

    fn phase_symbol<T: Float>(&self, signs: SignPair) -> BilinearSymbol<T> {
        family_phase_a(signs, self.get(signs)).with_policy(SingularPolicy::Error)
    }

    /// `b_{μσι}(z₁,z₂,z₃) = a_{σι}(z₂,z₃) Σ_ν [(Φ⁻¹a)_{μν}(z₁, η) + (Φ⁻¹a)_{νμ}(η, z₁)]`, `η = z₂+z₃`.
    pub fn cubic_symbol<T: Float>(&self, signs: SignTriple) -> TrilinearSymbol<T> {
        let SignTriple(mu, sigma, iota) = signs;
        let inner = self.get(SignPair(sigma, iota)).clone();
        let outer: Vec<(Sign, ASymbol, ASymbol)> =
            Sign::BOTH.iter().map(|&nu| (nu, self.get(SignPair(mu, nu)).clone(), self.get(SignPair(nu, mu)).clone())).collect();
        let label = format!("b[{}{}{}]", mu.symbol(), sigma.symbol(), iota.symbol());
        TrilinearSymbol::new(label, move |z1: &[T], z2: &[T], z3: &[T]| {
            let d = z1.len();
            let mut eta = [T::zero(); 3];
            for i in 0..d {
                eta[i] = z2[i] + z3[i];
            }
            let eta = &eta[..d];
            let mut acc = C::new(T::zero(), T::zero());
            for (nu, first, second) in &outer {
                let p1 = phase_inverse(SignPair(mu, *nu), z1, eta)?;
                let p2 = phase_inverse(SignPair(*nu, mu), eta, z1)?;
                acc = acc + first.eval(z1, eta) * p1 + second.eval(eta, z1) * p2;
            }
            Some(inner.eval(z2, z3) * acc)
        })
        .with_policy(SingularPolicy::Error)
    }
}

/// `Σ_{μν} B_{a_{μν}}(U_μ, U_ν)`, which reproduces `F`.
pub fn quadratic_from_kernels<T: Float>(state: &KGState<T>, kernels: &Kernels) -> Result<Field<T>, DynamicsError> {
    let mut out = Field::zeros(state.grid());
    for (signs, a) in &kernels.a {
        let b = bilinear_with(&family_a(*signs, a), &state.unknown(signs.0), &state.unknown(signs.1), Path::Auto)?;
        out = out.add(&b.field)?;
    }
    Ok(out)
}

/// `e^{-itΛ}B_{Φ⁻¹a_{μν}}(U_μ, U_ν)` at the state's time.
pub fn normal_form_boundary<T: Float>(
    state: &KGState<T>,
    kernels: &Kernels,
    signs: SignPair,
) -> Result<Field<T>, DynamicsError> {
    let b = bilinear_with(&kernels.phase_symbol(signs), &state.unknown(signs.0), &state.unknown(signs.1), Path::Auto)?;
    Ok(semigroup(&b.field, state.t, Sign::Minus))
}

/// Sum of [`normal_form_boundary`] over the four sign pairs.
pub fn boundary_total<T: Float>(state: &KGState<T>, kernels: &Kernels) -> Result<Field<T>, DynamicsError> {
    let mut out = Field::zeros(state.grid());
    for signs in SignPair::ALL {
        out = out.add(&normal_form_boundary(state, kernels, signs)?)?;
    }
    Ok(out)
}

/// How the cubic integrand is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CubicRoute {
    /// Bilinears applied to the quadratic nonlinearity.
    #[default]
    Nested,
    /// One trilinear pseudoproduct per sign triple.
    Trilinear,
}

/// `e^{-itΛ}Σ_{μν}[B_{Φ⁻¹a_{μν}}(F, U_ν) + B_{Φ⁻¹a_{μν}}(U_μ, F)]`, without the leading `i`.
pub fn cubic_term<T: Float>(state: &KGState<T>, kernels: &Kernels, route: CubicRoute) -> Result<Field<T>, DynamicsError> {
    let grid = state.grid();
    let mut out = Field::zeros(grid);
    match route {
        CubicRoute::Nested => {
            let f = quadratic_from_kernels(state, kernels)?;
            for signs in SignPair::ALL {
                let m = kernels.phase_symbol(signs);
                let left = bilinear_with(&m, &f, &state.unknown(signs.1), Path::Auto)?;
                let right = bilinear_with(&m, &state.unknown(signs.0), &f, Path::Auto)?;
                out = out.add(&left.field)?.add(&right.field)?;
            }
        }
        CubicRoute::Trilinear => {
            for mu in Sign::BOTH {
                for sigma in Sign::BOTH {
                    for iota in Sign::BOTH {
                        let b = kernels.cubic_symbol(SignTriple(mu, sigma, iota));
                        let t = trilinear_with(
                            &b,
                            &state.unknown(mu),
                            &state.unknown(sigma),
                            &state.unknown(iota),
                            Path::Fast,
                        )?;
                        out = out.add(&t.field)?;
                    }
                }
            }
        }
    }
    Ok(semigroup(&out, state.t, Sign::Minus))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Quadrature {
    Trapezoid,
    #[default]
    Simpson,
}

/// Terms of the profile identity on `[t₀, t]`, as `L²` norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuhamelReport {
    pub t: f64,
    /// `‖V(t) - V(t₀)‖`.
    pub increment: f64,
    /// `‖boundary(t) - boundary(t₀)‖`.
    pub boundary: f64,
    /// `‖∫ cubic‖`.
    pub cubic: f64,
    /// `‖V(t) - V_lin(t) + i Δboundary - i∫cubic‖`, where `V_lin` is the profile of the
    /// same integrator run on the linear equation; analytically `V_lin(t) = V(t₀)`.
    pub mismatch: f64,
    /// The same with `V(t₀)` in place of `V_lin(t)`, so it includes the linear phase error of the integrator.
    pub mismatch_raw: f64,
    /// Cubic-integrand nodes used.
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DuhamelConfig {
    pub t_end: f64,
    pub dt: f64,
    /// Solver steps between quadrature nodes.
    pub every: usize,
    pub quadrature: Quadrature,
    pub route: CubicRoute,
}

/// Integrate from `initial` and compare both sides of the profile identity at `t_end`.
pub fn duhamel_check<T: Float>(
    initial: &KGState<T>,
    spec: &NonlinearitySpec,
    kernels: &Kernels,
    cfg: &DuhamelConfig,
) -> Result<DuhamelReport, DynamicsError> {
    let span = cfg.t_end - initial.t.as_f64();
    let every = cfg.every.max(1);
    let mut intervals = ((span / (cfg.dt * every as f64)).ceil() as usize).max(1);
    if cfg.quadrature == Quadrature::Simpson && intervals % 2 == 1 {
        intervals += 1;
    }
    let steps = intervals * every;
    let dt = T::lit(span / steps as f64);
    let h = span / intervals as f64;

    let linear = NonlinearitySpec::zero(spec.dim);
    let mut st = initial.clone();
    let mut lin = initial.clone();
    let v0 = st.profile();
    let b0 = boundary_total(&st, kernels)?;
    let mut nodes = vec![cubic_term(&st, kernels, cfg.route)?];
    for _ in 0..intervals {
        for _ in 0..every {
            st = step(&st, spec, dt)?;
            lin = step(&lin, &linear, dt)?;
        }
        nodes.push(cubic_term(&st, kernels, cfg.route)?);
    }
    st.t = T::lit(cfg.t_end);
    lin.t = st.t;

    let weight = |k: usize| -> f64 {
        match cfg.quadrature {
            Quadrature::Trapezoid => {
                if k == 0 || k == intervals {
                    h / 2.0
                } else {
                    h
                }
            }
            Quadrature::Simpson => {
                if k == 0 || k == intervals {
                    h / 3.0
                } else if k % 2 == 1 {
                    4.0 * h / 3.0
                } else {
                    2.0 * h / 3.0
                }
            }
        }
    };
    let mut integral = Field::zeros(st.grid());
    for (k, c) in nodes.iter().enumerate() {
        integral = integral.axpy(re(weight(k)), c)?;
    }

    let vt = st.profile();
    let dv = vt.sub(&v0)?;
    let db = boundary_total(&st, kernels)?.sub(&b0)?;
    let predicted = db.scale(im(-1.0)).axpy(im(1.0), &integral)?;
    Ok(DuhamelReport {
        t: cfg.t_end,
        increment: dv.norm_l2().as_f64(),
        boundary: db.norm_l2().as_f64(),
        cubic: integral.norm_l2().as_f64(),
        mismatch: vt.sub(&lin.profile())?.sub(&predicted)?.norm_l2().as_f64(),
        mismatch_raw: dv.sub(&predicted)?.norm_l2().as_f64(),
        nodes: nodes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{initial_data, DataShape};
    use crate::solver::nonlinearity;
    use kg_spectral::make_grid;
    use Sign::{Minus, Plus};

    /// `a_{μν}` of the default 1D instance, derived by hand.
    fn hand(mu: f64, nu: f64, x1: f64, x2: f64) -> f64 {
        let (l1, l2) = ((1.0 + x1 * x1).sqrt(), (1.0 + x2 * x2).sqrt());
        mu * x2 / (2.0 * l1) + mu * nu * x2 * x2 / (4.0 * l1 * l2) - mu * nu / (4.0 * l1 * l2) + 0.25
    }

    #[test]
    fn default_kernels_match_hand_derivation() {
        let k = Kernels::derive(&NonlinearitySpec::default_instance(1)).unwrap();
        for signs in SignPair::ALL {
            let (mu, nu) = (signs.0.value::<f64>(), signs.1.value::<f64>());
            for &(x1, x2) in &[(0.0, 0.0), (1.5, -0.7), (-3.0, 2.0), (0.25, 4.0)] {
                let got = k.eval(signs, &[x1], &[x2]);
                assert!((got - C::new(hand(mu, nu, x1, x2), 0.0)).norm() < 1e-14, "{signs:?} {x1} {x2} {got}");
            }
        }
    }

    #[test]
    fn kernels_reproduce_the_nonlinearity() {
        for (d, n) in [(1, 32), (2, 16)] {
            let g = make_grid(d, n, 6.0).unwrap();
            let st = initial_data(&g, DataShape::Band { radius: 2.0, with_mean: true }, 4.0, 0.3, 11);
            let mut spec = NonlinearitySpec::standard(d, 0.7, -0.4, 1.3, 0.2);
            spec.s.push((Var::Dx(d - 1), Var::U, 0.9));
            let k = Kernels::derive(&spec).unwrap();
            let want = nonlinearity(&st, &spec).unwrap();
            let got = quadratic_from_kernels(&st, &k).unwrap();
            let err = got.max_abs_diff(&want).unwrap() / want.norm_sup();
            assert!(err < 1e-12, "d={d} {err:e}");
        }
    }

    #[test]
    fn zero_state_has_zero_boundary() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let k = Kernels::derive(&NonlinearitySpec::default_instance(1)).unwrap();
        let st = KGState::<f64>::zeros(&g, 1.0);
        assert_eq!(boundary_total(&st, &k).unwrap().norm_l2(), 0.0);
    }

    #[test]
    fn cubic_routes_agree() {
        let g = make_grid(1, 32, 6.0).unwrap();
        let st = initial_data(&g, DataShape::Band { radius: 1.5, with_mean: true }, 4.0, 0.2, 2);
        let k = Kernels::derive(&NonlinearitySpec::default_instance(1)).unwrap();
        let a = cubic_term(&st, &k, CubicRoute::Nested).unwrap();
        let b = cubic_term(&st, &k, CubicRoute::Trilinear).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-12 * a.norm_sup(), "{}", a.max_abs_diff(&b).unwrap());
    }

    #[test]
    fn boundary_phase_derivative_is_the_quadratic_term() {
        // ∂_t of e^{-itΛ}B_{Φ⁻¹a}(e^{itμΛ}f, e^{itνΛ}g) under the linear flow equals i e^{-itΛ}B_a(U_μ, U_ν).
        let g = make_grid(1, 32, 6.0).unwrap();
        let k = Kernels::derive(&NonlinearitySpec::default_instance(1)).unwrap();
        let s0 = initial_data(&g, DataShape::Band { radius: 1.5, with_mean: true }, 4.0, 0.2, 4);
        let h = 1e-3;
        let (sm, sp) = (crate::solver::linear_exact(&s0, 1.0 - h), crate::solver::linear_exact(&s0, 1.0 + h));
        for signs in [SignPair(Plus, Plus), SignPair(Plus, Minus), SignPair(Minus, Minus)] {
            let d = normal_form_boundary(&sp, &k, signs).unwrap().sub(&normal_form_boundary(&sm, &k, signs).unwrap()).unwrap();
            let d = d.scale(re(0.5 / h));
            let a = bilinear_with(&family_a(signs, k.get(signs)), &s0.unknown(signs.0), &s0.unknown(signs.1), Path::Auto)
                .unwrap()
                .field;
            let want = semigroup(&a, 1.0, Sign::Minus).scale(im(1.0));
            let err = d.max_abs_diff(&want).unwrap() / want.norm_sup();
            assert!(err < 1e-5, "{signs:?} {err:e}");
        }
    }
}

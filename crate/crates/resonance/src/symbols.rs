//! Bilinear and trilinear symbol families built on the quadratic phase.
//!
//! Bilinear symbols take `(ξ₁, ξ₂) = (ξ-η, η)`; trilinear ones take
//! `(ξ-η, η-ζ, ζ)`. Evaluation returns `None` on a singular pairing.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use kg_spectral::{cplx, psi, Float, Sign, C};

use crate::error::ResonanceError;
use crate::phase::{add, lam, norm, phase_inverse, SignPair, SignTriple};

/// Scale of the narrow-angle cutoff `ψ_{≤-10}(r) = ψ(1024 r)`.
pub const ANGLE_SCALE: f64 = 1024.0;

/// What to do when a symbol is singular on a pairing that carries mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularPolicy {
    /// Drop the pairing and count it.
    #[default]
    Exclude,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Constant,
    Custom,
    A(SignPair),
    PhaseA(SignPair),
    Energy(SignPair),
    EnergyLow(SignPair),
    Quartic(SignPair),
    PhaseQuartic(SignPair),
}

type BiFn<T> = dyn Fn(&[T], &[T]) -> Option<C<T>> + Send + Sync;
type TriFn<T> = dyn Fn(&[T], &[T], &[T]) -> Option<C<T>> + Send + Sync;

#[derive(Clone)]
pub struct BilinearSymbol<T: Float> {
    f: Arc<BiFn<T>>,
    pub family: Family,
    pub label: String,
    pub policy: SingularPolicy,
}

impl<T: Float> fmt::Debug for BilinearSymbol<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BilinearSymbol")
            .field("family", &self.family)
            .field("label", &self.label)
            .field("policy", &self.policy)
            .finish()
    }
}

impl<T: Float> BilinearSymbol<T> {
    pub fn new(
        family: Family,
        label: impl Into<String>,
        f: impl Fn(&[T], &[T]) -> Option<C<T>> + Send + Sync + 'static,
    ) -> Self {
        BilinearSymbol { f: Arc::new(f), family, label: label.into(), policy: SingularPolicy::default() }
    }

    pub fn one() -> Self {
        Self::new(Family::Constant, "1", |_, _| Some(cplx(T::one(), T::zero())))
    }

    pub fn with_policy(mut self, policy: SingularPolicy) -> Self {
        self.policy = policy;
        self
    }

    #[inline]
    pub fn eval(&self, x1: &[T], x2: &[T]) -> Option<C<T>> {
        (self.f)(x1, x2)
    }

    pub fn is_constant_one(&self) -> bool {
        self.family == Family::Constant
    }
}

#[derive(Clone)]
pub struct TrilinearSymbol<T: Float> {
    f: Arc<TriFn<T>>,
    pub label: String,
    pub policy: SingularPolicy,
}

impl<T: Float> fmt::Debug for TrilinearSymbol<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TrilinearSymbol").field("label", &self.label).field("policy", &self.policy).finish()
    }
}

impl<T: Float> TrilinearSymbol<T> {
    pub fn new(label: impl Into<String>, f: impl Fn(&[T], &[T], &[T]) -> Option<C<T>> + Send + Sync + 'static) -> Self {
        TrilinearSymbol { f: Arc::new(f), label: label.into(), policy: SingularPolicy::default() }
    }

    pub fn one() -> Self {
        Self::new("1", |_, _, _| Some(cplx(T::one(), T::zero())))
    }

    pub fn with_policy(mut self, policy: SingularPolicy) -> Self {
        self.policy = policy;
        self
    }

    #[inline]
    pub fn eval(&self, z1: &[T], z2: &[T], z3: &[T]) -> Option<C<T>> {
        (self.f)(z1, z2, z3)
    }
}

/// One factor of a quadratic-nonlinearity symbol. Axis indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AFactor {
    One,
    Eta(usize),
    InvLambdaEta,
    InvLambdaDiff,
    EtaEtaOverLambda(usize, usize),
    DiffOverLambda(usize),
}

impl AFactor {
    pub fn eval<T: Float>(self, x1: &[T], x2: &[T]) -> T {
        let pick = |v: &[T], j: usize| v.get(j).copied().unwrap_or_else(T::zero);
        match self {
            AFactor::One => T::one(),
            AFactor::Eta(j) => pick(x2, j),
            AFactor::InvLambdaEta => lam(x2).recip(),
            AFactor::InvLambdaDiff => lam(x1).recip(),
            AFactor::EtaEtaOverLambda(j, l) => pick(x2, j) * pick(x2, l) / lam(x2),
            AFactor::DiffOverLambda(l) => pick(x1, l) / lam(x1),
        }
    }

    /// Largest axis index referenced, if any.
    pub fn max_axis(self) -> Option<usize> {
        match self {
            AFactor::Eta(j) | AFactor::DiffOverLambda(j) => Some(j),
            AFactor::EtaEtaOverLambda(j, l) => Some(j.max(l)),
            _ => None,
        }
    }
}

impl fmt::Display for AFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AFactor::One => write!(f, "1"),
            AFactor::Eta(j) => write!(f, "eta{}", j + 1),
            AFactor::InvLambdaEta => write!(f, "1/lambda(eta)"),
            AFactor::InvLambdaDiff => write!(f, "1/lambda(xi-eta)"),
            AFactor::EtaEtaOverLambda(j, l) => write!(f, "eta{}*eta{}/lambda(eta)", j + 1, l + 1),
            AFactor::DiffOverLambda(l) => write!(f, "(xi{0}-eta{0})/lambda(xi-eta)", l + 1),
        }
    }
}

fn axis(s: &str) -> Option<usize> {
    let j: usize = s.parse().ok()?;
    (1..=3).contains(&j).then(|| j - 1)
}

impl FromStr for AFactor {
    type Err = ResonanceError;

    /// Accepts `1`, `eta1`, `1/lambda(eta)`, `1/lambda(xi-eta)`,
    /// `eta1*eta2/lambda(eta)` and `(xi1-eta1)/lambda(xi-eta)`; `Λ` may stand for `lambda`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase().replace('λ', "lambda");
        let bad = || ResonanceError::Factor(s.to_string());
        match t.as_str() {
            "1" => return Ok(AFactor::One),
            "1/lambda(eta)" => return Ok(AFactor::InvLambdaEta),
            "1/lambda(xi-eta)" => return Ok(AFactor::InvLambdaDiff),
            _ => {}
        }
        if let Some(num) = t.strip_suffix("/lambda(eta)") {
            let (a, b) = num.split_once('*').ok_or_else(bad)?;
            let j = a.strip_prefix("eta").and_then(axis).ok_or_else(bad)?;
            let l = b.strip_prefix("eta").and_then(axis).ok_or_else(bad)?;
            return Ok(AFactor::EtaEtaOverLambda(j, l));
        }
        if let Some(num) = t.strip_suffix("/lambda(xi-eta)") {
            let inner = num.strip_prefix("(xi").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            let (a, b) = inner.split_once("-eta").ok_or_else(bad)?;
            let l = axis(a).ok_or_else(bad)?;
            if axis(b) != Some(l) {
                return Err(bad());
            }
            return Ok(AFactor::DiffOverLambda(l));
        }
        if let Some(j) = t.strip_prefix("eta").and_then(axis) {
            return Ok(AFactor::Eta(j));
        }
        Err(bad())
    }
}

/// Linear combination of products of [`AFactor`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct ASymbol {
    pub terms: Vec<(C<f64>, Vec<AFactor>)>,
}

impl ASymbol {
    pub fn one() -> Self {
        Self::product(vec![AFactor::One])
    }

    pub fn product(factors: Vec<AFactor>) -> Self {
        ASymbol { terms: vec![(C::new(1.0, 0.0), factors)] }
    }

    pub fn plus(mut self, coeff: C<f64>, factors: Vec<AFactor>) -> Self {
        self.terms.push((coeff, factors));
        self
    }

    /// Parse one product, factors separated by `,` or `;`.
    pub fn parse_product(s: &str) -> Result<Self, ResonanceError> {
        let factors = s
            .split([',', ';'])
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<AFactor>, _>>()?;
        if factors.is_empty() {
            return Err(ResonanceError::Factor(s.to_string()));
        }
        Ok(Self::product(factors))
    }

    pub fn max_axis(&self) -> Option<usize> {
        self.terms.iter().flat_map(|(_, fs)| fs.iter().filter_map(|f| f.max_axis())).max()
    }

    pub fn eval<T: Float>(&self, x1: &[T], x2: &[T]) -> C<T> {
        let mut acc = cplx(T::zero(), T::zero());
        for (c, fs) in &self.terms {
            let p = fs.iter().fold(T::one(), |a, f| a * f.eval(x1, x2));
            acc = acc + cplx(T::lit(c.re), T::lit(c.im)) * p;
        }
        acc
    }

    /// Human-readable form, e.g. `eta1·1/lambda(eta)`.
    pub fn label(&self) -> String {
        self.terms
            .iter()
            .map(|(c, fs)| {
                let body = fs.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("·");
                if *c == C::new(1.0, 0.0) {
                    body
                } else {
                    format!("({}{:+}i)·{}", c.re, c.im, body)
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `a_{μν}` as a bilinear symbol; the signs are metadata only.
pub fn family_a<T: Float>(signs: SignPair, a: &ASymbol) -> BilinearSymbol<T> {
    let a = a.clone();
    BilinearSymbol::new(Family::A(signs), a.label(), move |x1: &[T], x2: &[T]| Some(a.eval(x1, x2)))
}

/// `Φ^{-1}_{μν} a_{μν}`.
pub fn family_phase_a<T: Float>(signs: SignPair, a: &ASymbol) -> BilinearSymbol<T> {
    let a = a.clone();
    let label = format!("Phi^-1_{}·{}", signs.label(), a.label());
    BilinearSymbol::new(Family::PhaseA(signs), label, move |x1: &[T], x2: &[T]| {
        phase_inverse(signs, x1, x2).map(|p| a.eval(x1, x2) * p)
    })
}

/// `ψ_{≤-10}(|num|/|den|)`; `None` when both vanish.
fn narrow<T: Float>(num: T, den: T) -> Option<T> {
    if den == T::zero() {
        return if num == T::zero() { None } else { Some(T::zero()) };
    }
    Some(psi(T::lit(ANGLE_SCALE) * num / den))
}

fn scaled_sum<T: Float>(a: &[T], sa: T, b: &[T], sb: T) -> [T; 3] {
    let mut out = [T::zero(); 3];
    for i in 0..a.len() {
        out[i] = sa * a[i] + sb * b[i];
    }
    out
}

/// `m_𝒮 = -iΦ^{-1}_{μν}[1 - ψ_{≤-10}(|ξ₁|/|ξ₁+2ξ₂|) - ψ_{≤-10}(|ξ₂|/|2ξ₁+ξ₂|)]`.
pub fn family_energy<T: Float>(signs: SignPair) -> BilinearSymbol<T> {
    let label = format!("m_S[{}]", signs.label());
    BilinearSymbol::new(Family::Energy(signs), label, move |x1: &[T], x2: &[T]| {
        let d = x1.len();
        let two = T::lit(2.0);
        let c1 = narrow(norm(x1), norm(&scaled_sum(x1, T::one(), x2, two)[..d]))?;
        let c2 = narrow(norm(x2), norm(&scaled_sum(x1, two, x2, T::one())[..d]))?;
        let p = phase_inverse(signs, x1, x2)?;
        Some(cplx(T::zero(), -p * (T::one() - c1 - c2)))
    })
}

/// `m_{𝒮₁} = -iΦ^{-1}_{μν}`.
pub fn family_energy_low<T: Float>(signs: SignPair) -> BilinearSymbol<T> {
    let label = format!("m_S1[{}]", signs.label());
    BilinearSymbol::new(Family::EnergyLow(signs), label, move |x1: &[T], x2: &[T]| {
        phase_inverse(signs, x1, x2).map(|p| cplx(T::zero(), -p))
    })
}

/// Sobolev index `N = 2d + ⌊d/2⌋ + 6`.
pub fn regularity(dim: usize) -> i32 {
    (2 * dim + dim / 2 + 6) as i32
}

/// The five symbol orders of `m_𝒬`, summing to `2N+1`.
pub fn quartic_orders(n: i32) -> [i32; 5] {
    [0, 0, 0, n, n + 1]
}

fn lam_pow<T: Float>(v: &[T], m: i32) -> T {
    lam(v).powi(m)
}

/// Vanishes on the support of `ψ_{-1}`.
fn high_pass<T: Float>(v: &[T]) -> T {
    T::one() - psi(norm(v))
}

/// Evaluate `m_𝒬` with orders `(0,0,0,N,N+1)`.
pub fn quartic_value<T: Float>(x1: &[T], x2: &[T], n: i32) -> Option<T> {
    let d = x1.len();
    let [m1, m2, m3, m4, m5] = quartic_orders(n);
    let s = add(x1, x2);
    let s = &s[..d];
    let n2 = lam_pow(x2, m2) * high_pass(x2);
    let n3 = lam_pow(s, m3) * high_pass(s);
    if n2 == T::zero() || n3 == T::zero() {
        return Some(T::zero());
    }
    let two = T::lit(2.0);
    let mid2 = scaled_sum(x1, T::one(), x2, two);
    let cut = narrow(norm(x1), norm(&mid2[..d]))?;
    if cut == T::zero() {
        return Some(T::zero());
    }
    let mid = scaled_sum(x1, T::lit(0.5), x2, T::one());
    let mid = &mid[..d];
    let bracket = lam_pow(s, m4) * lam_pow(x2, m5) - lam_pow(mid, m4) * lam_pow(mid, m5);
    Some(cut * lam_pow(x1, m1) * n2 * n3 * bracket)
}

/// `m_𝒬` with Sobolev index `n`.
pub fn family_quartic<T: Float>(signs: SignPair, n: i32) -> BilinearSymbol<T> {
    let label = format!("m_Q[{},N={}]", signs.label(), n);
    BilinearSymbol::new(Family::Quartic(signs), label, move |x1: &[T], x2: &[T]| {
        quartic_value(x1, x2, n).map(|v| cplx(v, T::zero()))
    })
}

/// `Φ^{-1}_{μν} m_𝒬`.
pub fn family_phase_quartic<T: Float>(signs: SignPair, n: i32) -> BilinearSymbol<T> {
    let label = format!("Phi^-1_{}·m_Q[N={}]", signs.label(), n);
    BilinearSymbol::new(Family::PhaseQuartic(signs), label, move |x1: &[T], x2: &[T]| {
        let q = quartic_value(x1, x2, n)?;
        if q == T::zero() {
            return Some(cplx(T::zero(), T::zero()));
        }
        phase_inverse(signs, x1, x2).map(|p| cplx(p * q, T::zero()))
    })
}

/// Cubic-normal-form symbol
/// `b = Σ_ν a_{σι}(η-ζ, ζ)·(Φ^{-1}_{μν} a_{μν}(ξ-η, η) + Φ^{-1}_{νμ} a_{νμ}(ξ, ξ-η))`,
/// with `(z₁, z₂, z₃) = (ξ-η, η-ζ, ζ)`.
pub fn family_b<T: Float>(signs: SignTriple, a_inner: &ASymbol, a_outer: &ASymbol) -> TrilinearSymbol<T> {
    let (ai, ao) = (a_inner.clone(), a_outer.clone());
    let SignTriple(mu, sigma, iota) = signs;
    let label = format!("b[{}{}{}]({}; {})", mu.symbol(), sigma.symbol(), iota.symbol(), ai.label(), ao.label());
    TrilinearSymbol::new(label, move |z1: &[T], z2: &[T], z3: &[T]| {
        let d = z1.len();
        let eta = add(z2, z3);
        let eta = &eta[..d];
        let xi = add(z1, eta);
        let xi = &xi[..d];
        let inner = ai.eval(z2, z3);
        let mut acc = cplx(T::zero(), T::zero());
        for nu in Sign::BOTH {
            let p1 = phase_inverse(SignPair(mu, nu), z1, eta)?;
            let p2 = phase_inverse(SignPair(nu, mu), xi, z1)?;
            acc = acc + ao.eval(z1, eta) * p1 + ao.eval(xi, z1) * p2;
        }
        Some(inner * acc)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Sign::*;

    fn close(a: C<f64>, b: C<f64>) -> bool {
        (a - b).norm() < 1e-13
    }

    #[test]
    fn factor_examples() {
        let s = ASymbol::product(vec![AFactor::Eta(0), AFactor::InvLambdaEta]);
        let v = s.eval(&[0.0f64, 0.0], &[2.0, 0.0]);
        assert!(close(v, C::new(2.0 / 5f64.sqrt(), 0.0)));
        let s = ASymbol::parse_product("(xi1-eta1)/lambda(xi-eta)").unwrap();
        assert!(close(s.eval(&[0.0f64, 3.0], &[1.0, 1.0]), C::new(0.0, 0.0)));
        let one: BilinearSymbol<f64> = family_a(SignPair(Plus, Plus), &ASymbol::parse_product("1").unwrap());
        assert_eq!(one.eval(&[3.0], &[-7.0]), Some(C::new(1.0, 0.0)));
    }

    #[test]
    fn factor_parsing_round_trips() {
        let all = [
            AFactor::One,
            AFactor::Eta(1),
            AFactor::InvLambdaEta,
            AFactor::InvLambdaDiff,
            AFactor::EtaEtaOverLambda(0, 2),
            AFactor::DiffOverLambda(1),
        ];
        for f in all {
            assert_eq!(f.to_string().parse::<AFactor>().unwrap(), f);
        }
        assert_eq!(" 1 / Λ(xi - eta) ".parse::<AFactor>().unwrap(), AFactor::InvLambdaDiff);
    }

    #[test]
    fn unknown_factors_rejected() {
        for bad in ["eta0", "eta4", "xi1", "eta1*eta2", "(xi1-eta2)/lambda(xi-eta)", "lambda(eta)", "2"] {
            assert!(bad.parse::<AFactor>().is_err(), "{bad}");
        }
        assert!(ASymbol::parse_product("eta1, zeta").is_err());
        assert!(ASymbol::parse_product(" , ").is_err());
    }

    #[test]
    fn b_vanishes_at_origin_for_unit_factors() {
        let one = ASymbol::one();
        for (s, i) in [(Plus, Plus), (Plus, Minus), (Minus, Minus)] {
            let b: TrilinearSymbol<f64> = family_b(SignTriple(Plus, s, i), &one, &one);
            let v = b.eval(&[0.0, 0.0], &[0.0, 0.0], &[0.0, 0.0]).unwrap();
            assert!(v.norm() < 1e-15);
        }
    }

    #[test]
    fn energy_symbols() {
        let s = SignPair(Plus, Minus);
        let ms: BilinearSymbol<f64> = family_energy(s);
        assert_eq!(ms.eval(&[0.0], &[0.0]), None);
        // Narrow-angle cutoffs are both off away from the axes of degeneracy.
        let (x1, x2) = ([1.0, 0.5], [-0.3, 2.0]);
        let want = C::new(0.0, -1.0 / crate::phase::phase(s, &x1, &x2));
        assert!(close(ms.eval(&x1, &x2).unwrap(), want));
        let m1: BilinearSymbol<f64> = family_energy_low(s);
        assert!(close(m1.eval(&x1, &x2).unwrap(), want));
        // |ξ₁| tiny relative to |ξ₁+2ξ₂| switches the first cutoff on.
        let v = ms.eval(&[1e-4, 0.0], &[3.0, 0.0]).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn quartic_bracket_vanishes_when_low_input_vanishes() {
        let n = regularity(2);
        assert_eq!(n, 11);
        assert_eq!(quartic_orders(n).iter().sum::<i32>(), 2 * n + 1);
        assert_eq!(quartic_value(&[0.0f64, 0.0], &[3.0, 1.0], n), Some(0.0));
        assert_eq!(quartic_value(&[0.0f64, 0.0], &[0.0, 0.0], n), Some(0.0));
        assert_eq!(quartic_value(&[1e-3f64, 0.0], &[0.5, 0.0], n), Some(0.0));
        let v = quartic_value(&[1e-3f64, 0.0], &[4.0, 0.0], n).unwrap();
        assert!(v != 0.0 && v.is_finite());
    }

    proptest! {
        #[test]
        fn b_matches_formula(z in proptest::collection::vec(-4.0f64..4.0, 3), si in 0usize..2, io in 0usize..2) {
            let sig = SignTriple(Minus, Sign::BOTH[si], Sign::BOTH[io]);
            let ai = ASymbol::product(vec![AFactor::Eta(0)]);
            let ao = ASymbol::product(vec![AFactor::InvLambdaDiff]);
            let b: TrilinearSymbol<f64> = family_b(sig, &ai, &ao);
            let (z1, z2, z3) = ([z[0]], [z[1]], [z[2]]);
            let (eta, xi) = (z2[0] + z3[0], z1[0] + z2[0] + z3[0]);
            let ph = |s: SignPair, a: f64, c: f64| crate::phase::phase(s, &[a], &[c]);
            let mut want = 0.0;
            for nu in Sign::BOTH {
                want += 1.0 / (1.0 + z1[0] * z1[0]).sqrt() / ph(SignPair(Minus, nu), z1[0], eta)
                    + 1.0 / (1.0 + xi * xi).sqrt() / ph(SignPair(nu, Minus), xi, z1[0]);
            }
            want *= z3[0];
            let got = b.eval(&z1, &z2, &z3).unwrap();
            prop_assert!((got.re - want).abs() <= 1e-12 * (1.0 + want.abs()) && got.im == 0.0);
        }

        #[test]
        fn b_bounded_when_phases_large(z in proptest::collection::vec(-6.0f64..6.0, 6), m in 0usize..2) {
            let mu = Sign::BOTH[m];
            let one = ASymbol::one();
            let b: TrilinearSymbol<f64> = family_b(SignTriple(mu, Plus, Minus), &one, &one);
            let (z1, z2, z3) = (&z[0..2], &z[2..4], &z[4..6]);
            let eta = add(z2, z3);
            let xi = add(z1, &eta[..2]);
            let all_large = Sign::BOTH.iter().all(|&nu| {
                crate::phase::phase(SignPair(mu, nu), z1, &eta[..2]).abs() >= 1.0
                    && crate::phase::phase(SignPair(nu, mu), &xi[..2], z1).abs() >= 1.0
            });
            prop_assume!(all_large);
            // Four terms of modulus at most one. For μ = + two are positive and
            // two negative, which halves the bound.
            let bound = if mu == Plus { 2.0 } else { 4.0 };
            prop_assert!(b.eval(z1, z2, z3).unwrap().norm() <= bound + 1e-12);
        }
    }
}

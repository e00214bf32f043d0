//! Quadratic and cubic resonance phases.

use kg_spectral::{japanese, Float, Sign};

/// Moduli below this are treated as resonant and excluded from `Φ^{-1}`.
pub const RESONANCE_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPair(pub Sign, pub Sign);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignTriple(pub Sign, pub Sign, pub Sign);

impl SignPair {
    pub const ALL: [SignPair; 4] = [
        SignPair(Sign::Plus, Sign::Plus),
        SignPair(Sign::Plus, Sign::Minus),
        SignPair(Sign::Minus, Sign::Plus),
        SignPair(Sign::Minus, Sign::Minus),
    ];

    pub fn swap(self) -> SignPair {
        SignPair(self.1, self.0)
    }

    pub fn label(self) -> String {
        format!("{}{}", self.0.symbol(), self.1.symbol())
    }

    /// Parse `++`, `+-`, `-+`, `--` (also `pp`, `pm`, ...).
    pub fn parse(s: &str) -> Option<SignPair> {
        let mut it = s.chars();
        let a = Sign::parse(it.next()?)?;
        let b = Sign::parse(it.next()?)?;
        it.next().is_none().then_some(SignPair(a, b))
    }
}

pub(crate) fn norm<T: Float>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, &x| a + x * x).sqrt()
}

pub(crate) fn add<T: Float>(a: &[T], b: &[T]) -> [T; 3] {
    let mut out = [T::zero(); 3];
    for i in 0..a.len() {
        out[i] = a[i] + b[i];
    }
    out
}

pub(crate) fn lam<T: Float>(v: &[T]) -> T {
    japanese(norm(v))
}

/// `Φ_{μν}(ξ₁, ξ₂) = -Λ(ξ₁+ξ₂) + μΛ(ξ₁) + νΛ(ξ₂)`.
pub fn phase<T: Float>(s: SignPair, x1: &[T], x2: &[T]) -> T {
    let d = x1.len();
    let sum = add(x1, x2);
    // Grouped so that swapping the arguments together with the signs is exact.
    -lam(&sum[..d]) + (s.0.value::<T>() * lam(x1) + s.1.value::<T>() * lam(x2))
}

/// `Φ^{-1}`, or `None` on a resonant pairing.
pub fn phase_inverse<T: Float>(s: SignPair, x1: &[T], x2: &[T]) -> Option<T> {
    let p = phase(s, x1, x2);
    (p.abs().as_f64() >= RESONANCE_FLOOR).then(|| p.recip())
}

/// `Ψ_{μσι}(ξ, η, ζ) = -Λ(ξ+η+ζ) + μΛ(ξ) + σΛ(η) + ιΛ(ζ)`.
pub fn cubic_phase<T: Float>(s: SignTriple, x: &[T], y: &[T], z: &[T]) -> T {
    let d = x.len();
    let xy = add(x, y);
    let all = add(&xy[..d], z);
    -lam(&all[..d]) + s.0.value::<T>() * lam(x) + s.1.value::<T>() * lam(y) + s.2.value::<T>() * lam(z)
}

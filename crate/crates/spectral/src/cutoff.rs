//! The smooth radial cutoff `ψ` and the dyadic bands built from it.

use crate::float::Float;

const PLATEAU: f64 = 1.25;
const SUPPORT: f64 = 1.6;

fn bump<T: Float>(s: T) -> T {
    if s > T::zero() {
        (-s.recip()).exp()
    } else {
        T::zero()
    }
}

/// Smooth step: 0 for `s <= 0`, 1 for `s >= 1`.
pub fn smooth_step<T: Float>(s: T) -> T {
    let a = bump(s);
    let b = bump(T::one() - s);
    if a + b == T::zero() {
        return T::zero();
    }
    a / (a + b)
}

/// Base cutoff: 1 on `|r| <= 5/4`, 0 on `|r| >= 8/5`.
pub fn psi<T: Float>(r: T) -> T {
    let r = r.abs();
    if r <= T::lit(PLATEAU) {
        return T::one();
    }
    if r >= T::lit(SUPPORT) {
        return T::zero();
    }
    smooth_step((T::lit(SUPPORT) - r) / T::lit(SUPPORT - PLATEAU))
}

/// Low-pass `ψ_{≤k}(x) = ψ(|x|/2^k)`; equals the sum of all bands up to `k`.
pub fn psi_le<T: Float>(k: i32, x: T) -> T {
    psi(x.abs() / T::lit(2f64.powi(k)))
}

/// Band `ψ_k`: `ψ(2|x|)` for `k = -1`, otherwise `ψ(|x|/2^k) - ψ(|x|/2^{k-1})`.
///
/// Panics for `k < -1`; use [`CutoffFamily::band`] for a checked variant.
pub fn psi_band<T: Float>(k: i32, x: T) -> T {
    assert!(k >= -1, "band index below -1");
    if k == -1 {
        psi_le(-1, x)
    } else {
        psi_le(k, x) - psi_le(k - 1, x)
    }
}

/// `ψ_I` for the integer interval `[lo, hi]`, clamped at `-1`.
pub fn psi_interval<T: Float>(lo: i32, hi: i32, x: T) -> T {
    let lo = lo.max(-1);
    if hi < lo {
        return T::zero();
    }
    if lo == -1 {
        psi_le(hi, x)
    } else {
        psi_le(hi, x) - psi_le(lo - 1, x)
    }
}

/// Selector for a band, an interval of bands, or a low-pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    Single(i32),
    Interval(i32, i32),
    AtMost(i32),
}

impl Band {
    pub fn lowest(&self) -> i32 {
        match *self {
            Band::Single(k) => k,
            Band::Interval(lo, _) => lo,
            Band::AtMost(_) => -1,
        }
    }

    pub fn weight<T: Float>(&self, x: T) -> T {
        match *self {
            Band::Single(k) => psi_band(k, x),
            Band::Interval(lo, hi) => psi_interval(lo, hi, x),
            Band::AtMost(k) => psi_le(k, x),
        }
    }
}

/// Stateless handle over the cutoff family; safe to share across threads.
#[derive(Debug, Clone, Copy, Default)]
pub struct CutoffFamily;

impl CutoffFamily {
    pub fn base<T: Float>(&self, r: T) -> T {
        psi(r)
    }

    pub fn band<T: Float>(&self, k: i32, x: T) -> Option<T> {
        (k >= -1).then(|| psi_band(k, x))
    }

    pub fn interval<T: Float>(&self, lo: i32, hi: i32, x: T) -> T {
        psi_interval(lo, hi, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn plateau_examples() {
        assert_eq!(psi_band(-1, 0.5f64), 1.0);
        assert_eq!(psi_band(0, 0.5f64), 0.0);
        assert_eq!(psi_band(3, 10.0f64), 1.0);
    }

    #[test]
    fn plateau_and_support_edges() {
        assert_eq!(psi(1.25f64), 1.0);
        assert_eq!(psi(-1.25f64), 1.0);
        assert_eq!(psi(1.6f64), 0.0);
        assert!(psi(1.4f64) > 0.0 && psi(1.4f64) < 1.0);
    }

    #[test]
    fn midpoint_of_transition_is_half() {
        assert!((psi(1.425f64) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn checked_band_rejects_negative_index() {
        assert!(CutoffFamily.band(-2, 1.0f64).is_none());
        assert_eq!(CutoffFamily.band(-1, 0.1f64), Some(1.0));
    }

    #[test]
    fn works_in_single_precision() {
        assert_eq!(psi_band(3, 10.0f32), 1.0);
    }

    proptest! {
        #[test]
        fn partition_of_unity(x in 0.0f64..1.0e4) {
            let top = (x.max(1.0).log2().ceil() as i32) + 2;
            let s: f64 = (-1..=top).map(|k| psi_band(k, x)).sum();
            prop_assert!((s - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn monotone_on_transition(a in 1.25f64..1.6, b in 1.25f64..1.6) {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            prop_assert!(psi(lo) >= psi(hi));
        }

        #[test]
        fn bands_lie_in_unit_interval(k in -1i32..12, x in 0.0f64..5000.0) {
            let v = psi_band(k, x);
            prop_assert!((0.0..=1.0).contains(&v));
        }

        #[test]
        fn interval_is_sum_of_bands(lo in -1i32..6, len in 0i32..5, x in 0.0f64..300.0) {
            let hi = lo + len;
            let s: f64 = (lo..=hi).map(|k| psi_band(k, x)).sum();
            prop_assert!((s - psi_interval(lo, hi, x)).abs() <= 1e-12);
        }
    }
}

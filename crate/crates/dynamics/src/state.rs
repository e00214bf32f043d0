//! `(u, ∂_t u)` at one time, with the complex unknowns `U_± = w ± iΛu` and the profile.

use std::sync::Arc;

use kg_spectral::{lambda_apply, semigroup, Field, Float, Grid, Sign, C};

use crate::error::DynamicsError;

/// Initial time of every run.
pub const T0: f64 = 1.0;

#[derive(Debug, Clone)]
pub struct KGState<T: Float> {
    pub t: T,
    pub u: Field<T>,
    pub w: Field<T>,
}

impl<T: Float> KGState<T> {
    pub fn new(t: T, u: Field<T>, w: Field<T>) -> Result<Self, DynamicsError> {
        u.check_grid(&w)?;
        Ok(KGState { t, u, w })
    }

    pub fn zeros(grid: &Arc<Grid<T>>, t: T) -> Self {
        KGState { t, u: Field::zeros(grid), w: Field::zeros(grid) }
    }

    pub fn grid(&self) -> &Arc<Grid<T>> {
        self.u.grid()
    }

    /// `u = Λ^{-1} Im U`, `w = Re U`.
    pub fn from_unknown(t: T, big_u: &Field<T>) -> Self {
        let u = lambda_apply(&big_u.im(), -T::one());
        KGState { t, u, w: big_u.re() }
    }

    /// `U_± = w ± iΛu`.
    pub fn unknown(&self, sign: Sign) -> Field<T> {
        let lu = lambda_apply(&self.u, T::one());
        self.w.axpy(C::new(T::zero(), sign.value::<T>()), &lu).expect("state fields share a grid")
    }

    /// `U = U_+`.
    pub fn big_u(&self) -> Field<T> {
        self.unknown(Sign::Plus)
    }

    /// `V = e^{-itΛ} U`.
    pub fn profile(&self) -> Field<T> {
        semigroup(&self.big_u(), self.t, Sign::Minus)
    }

    /// Largest imaginary part of the samples of `u` and `w`.
    pub fn imaginary_part(&self) -> T {
        let im = |f: &Field<T>| f.physical().iter().map(|c| c.im.abs()).fold(T::zero(), T::max);
        im(&self.u).max(im(&self.w))
    }

    /// Reject states whose fields carry an imaginary part above `tol`.
    pub fn check_real(&self, tol: T) -> Result<(), DynamicsError> {
        let im = self.imaginary_part();
        if im > tol {
            return Err(DynamicsError::NotReal(im.as_f64()));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        let ok = |f: &Field<T>| f.spectrum().iter().all(|c| c.re.is_finite() && c.im.is_finite());
        ok(&self.u) && ok(&self.w)
    }

    /// `(αu, αw)`.
    pub fn scaled(&self, a: T) -> Self {
        let s = C::new(a, T::zero());
        KGState { t: self.t, u: self.u.scale(s), w: self.w.scale(s) }
    }
}

/// `profile` as a free function over a state.
pub fn profile<T: Float>(state: &KGState<T>) -> Field<T> {
    state.profile()
}

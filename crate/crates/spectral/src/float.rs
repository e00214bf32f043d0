//! Scalar abstraction shared by every numeric routine in the workspace.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits as nt;

/// Real scalar type the grid, fields and operators are generic over.
pub trait Float:
    nt::Float
    + nt::FloatConst
    + nt::FromPrimitive
    + nt::ToPrimitive
    + rustfft::FftNum
    + Default
    + Debug
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Machine epsilon scaled for round-off tolerant comparisons.
    const EPS: Self;

    fn lit(x: f64) -> Self;

    fn as_f64(self) -> f64;

    fn of_usize(n: usize) -> Self {
        Self::lit(n as f64)
    }
}

macro_rules! impl_float {
    ($t:ty) => {
        impl Float for $t {
            const EPS: Self = <$t>::EPSILON;

            #[inline]
            fn lit(x: f64) -> Self {
                x as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_float!(f32);
impl_float!(f64);

pub type C<T> = Complex<T>;

#[inline]
pub fn cplx<T: Float>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

/// `e^{iθ}`.
#[inline]
pub fn expi<T: Float>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

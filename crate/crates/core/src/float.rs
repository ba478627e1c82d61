//! Generic scalar abstraction for the numeric core.
//!
//! All core math is written against [`Real`], which is `f32`/`f64` through
//! `num-traits`. Concrete `f64` aliases for the domain types live at the
//! crate root.

use num_complex::Complex;

/// Floating point scalar usable by the numeric core: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into the scalar type.
    fn of(x: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(x).expect("finite literal")
    }

    /// Lossy conversion to `f64` (exact for `f64` itself).
    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).expect("finite value")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the generic scalar.
pub type C<T> = Complex<T>;

/// Shorthand for a purely real complex value.
pub fn creal<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `a + i b` from scalar parts.
pub fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

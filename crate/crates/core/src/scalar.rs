//! Floating-point scalar abstraction shared by the numerical modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type C<T> = Complex<T>;

pub(crate) fn dot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).fold(C::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

pub(crate) fn norm<T: Real>(a: &[C<T>]) -> T {
    a.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt()
}

pub(crate) fn axpy<T: Real>(alpha: C<T>, x: &[C<T>], y: &mut [C<T>]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub(crate) fn scale<T: Real>(alpha: T, x: &mut [C<T>]) {
    for xi in x.iter_mut() {
        *xi = *xi * alpha;
    }
}

/// `i^k` as a complex scalar.
pub(crate) fn i_pow<T: Real>(k: u8) -> C<T> {
    let (o, z) = (T::one(), T::zero());
    match k & 3 {
        0 => C::new(o, z),
        1 => C::new(z, o),
        2 => C::new(-o, z),
        _ => C::new(z, -o),
    }
}

//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    /// Smallest relative tolerance the scalar can honour in adaptive quadrature.
    #[inline]
    fn tolerance_floor() -> Self {
        Self::epsilon() * Self::lit(50.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Neumaier-compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry = self.carry + ((self.sum - t) + x);
        } else {
            self.carry = self.carry + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Real> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `x^p` for `x >= 0`, with `0^0 = 1` and `0^p = 0` for `p > 0`.
#[inline]
pub fn pos_pow<T: Real>(x: T, p: T) -> T {
    if p == T::zero() {
        T::one()
    } else if x <= T::zero() {
        T::zero()
    } else {
        x.powf(p)
    }
}

/// `(b² - s²)` evaluated as `(b - s)(b + s)`, clamped at zero.
#[inline]
pub fn diff_of_squares_pos<T: Real>(b: T, s: T) -> T {
    let v = (b - s) * (b + s);
    if v > T::zero() {
        v
    } else {
        T::zero()
    }
}

//! Complex values carrying an absolute error bound.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// A complex value together with a bound on its absolute error.
///
/// Arithmetic propagates the bounds to first order:
/// `|xy - x'y'| <= |x| e_y + |y| e_x + e_x e_y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexApprox<T> {
    pub value: Complex<T>,
    pub abs_error: T,
}

impl<T: Real> ComplexApprox<T> {
    pub fn new(value: Complex<T>, abs_error: T) -> Self {
        debug_assert!(abs_error >= T::zero() && abs_error.is_finite());
        Self { value, abs_error }
    }

    pub fn exact(value: Complex<T>) -> Self {
        Self::new(value, T::zero())
    }

    pub fn real(x: T, abs_error: T) -> Self {
        Self::new(Complex::new(x, T::zero()), abs_error)
    }

    pub fn norm(&self) -> T {
        self.value.norm()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.value.conj(), self.abs_error)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.value * c, self.abs_error * c.norm())
    }

    pub fn with_extra_error(self, extra: T) -> Self {
        Self::new(self.value, self.abs_error + extra)
    }

    /// True when `z` lies within the error disc (plus `slack`).
    pub fn contains(&self, z: Complex<T>, slack: T) -> bool {
        (self.value - z).norm() <= self.abs_error + slack
    }

    pub fn to_f64(&self) -> ComplexApprox<f64> {
        ComplexApprox {
            value: Complex::new(self.value.re.to_f64_lossy(), self.value.im.to_f64_lossy()),
            abs_error: self.abs_error.to_f64_lossy(),
        }
    }
}

impl<T: Real> Add for ComplexApprox<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.value + rhs.value, self.abs_error + rhs.abs_error)
    }
}

impl<T: Real> Sub for ComplexApprox<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.value - rhs.value, self.abs_error + rhs.abs_error)
    }
}

impl<T: Real> Neg for ComplexApprox<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.value, self.abs_error)
    }
}

impl<T: Real> Mul for ComplexApprox<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let err = self.value.norm() * rhs.abs_error
            + rhs.value.norm() * self.abs_error
            + self.abs_error * rhs.abs_error;
        Self::new(self.value * rhs.value, err)
    }
}

//! Compensated summation and worker-count independent parallel reductions.
//!
//! Parallel reductions split the input into fixed-size chunks, sum each chunk
//! with Neumaier compensation and then fold the chunk partials in order. The
//! chunk boundaries never depend on the thread pool, so results are
//! bit-identical for any number of workers.

use num_complex::Complex;
use rayon::prelude::*;

use crate::scalar::Real;

/// Elements per chunk in parallel reductions.
pub const REDUCTION_CHUNK: usize = 256;

/// Neumaier (improved Kahan) running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Real> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Real> Extend<T> for CompensatedSum<T> {
    fn extend<I: IntoIterator<Item = T>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of complex values, real and imaginary parts tracked separately.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum<T> {
    re: CompensatedSum<T>,
    im: CompensatedSum<T>,
}

impl<T: Real> ComplexSum<T> {
    pub fn new() -> Self {
        Self {
            re: CompensatedSum::new(),
            im: CompensatedSum::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl<T: Real> Extend<Complex<T>> for ComplexSum<T> {
    fn extend<I: IntoIterator<Item = Complex<T>>>(&mut self, iter: I) {
        for z in iter {
            self.add(z);
        }
    }
}

pub fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(iter: I) -> T {
    let mut acc = CompensatedSum::new();
    acc.extend(iter);
    acc.value()
}

pub fn compensated_sum_complex<T: Real, I: IntoIterator<Item = Complex<T>>>(iter: I) -> Complex<T> {
    let mut acc = ComplexSum::new();
    acc.extend(iter);
    acc.value()
}

/// Deterministic parallel sum of `f(i)` for `i in 0..n`.
pub fn par_sum<T, F>(n: usize, f: F) -> T
where
    T: Real,
    F: Fn(usize) -> T + Sync,
{
    let chunks = n.div_ceil(REDUCTION_CHUNK);
    let partials: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * REDUCTION_CHUNK;
            let hi = (lo + REDUCTION_CHUNK).min(n);
            compensated_sum((lo..hi).map(&f))
        })
        .collect();
    compensated_sum(partials)
}

/// Deterministic parallel sum of a slice.
pub fn par_sum_slice<T: Real>(values: &[T]) -> T {
    par_sum(values.len(), |i| values[i])
}

//! Steinhaus random multiplicative model for theta values.
//!
//! `f(p)` are independent and uniform on the unit circle (ChaCha8 stream
//! seeded by the caller), extended completely multiplicatively. The model
//! value is `sum_n f(n) n^eta exp(-pi n^2 / q)`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numtheory::{sieve, PrimeTable};
use crate::report::canonical_sum;
use crate::sum::{CompensatedSum, ComplexSum};
use crate::theta::truncation_length;

/// Fewest samples accepted by [`model_moment`].
pub const MIN_SAMPLES: usize = 100;

/// Blocks used for the median-of-means estimate.
pub const MEDIAN_BLOCKS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SteinhausSample {
    support: usize,
    seed: u64,
    /// `f(n)` for `0 <= n <= support`; index 0 is unused.
    values: Vec<Complex<f64>>,
}

impl SteinhausSample {
    pub fn new(support: usize, seed: u64) -> Result<Self> {
        if support < 2 {
            return domain(format!("support must be at least 2, got {support}"));
        }
        Ok(Self::with_table(&sieve(support)?, seed))
    }

    /// Draws a sample on `1..=primes.limit()`; angles are consumed in prime order.
    pub fn with_table(primes: &PrimeTable, seed: u64) -> Self {
        let support = primes.limit();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = vec![Complex::new(0.0, 0.0); support + 1];
        values[1] = Complex::new(1.0, 0.0);
        for &p in primes.primes() {
            let angle: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            values[p as usize] = Complex::from_polar(1.0, angle);
        }
        for n in 4..=support {
            let p = primes.smallest_prime_factor(n).expect("n >= 2") as usize;
            if p != n {
                values[n] = values[p] * values[n / p];
            }
        }
        Self { support, seed, values }
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn value(&self, n: usize) -> Option<Complex<f64>> {
        (n >= 1 && n <= self.support).then(|| self.values[n])
    }
}

fn weight(n: usize, q: u64, eta: u32) -> f64 {
    let nf = n as f64;
    nf.powi(eta as i32) * (-std::f64::consts::PI * nf * nf / q as f64).exp()
}

/// `sum_{n <= N} w_n^2` with `N` the theta truncation at `eps`.
pub fn weight_square_sum(q: u64, eta: u32, eps: f64) -> f64 {
    let n = truncation_length(q, 1.0, eta, eps);
    let mut acc = CompensatedSum::new();
    for m in 1..=n {
        acc.add(weight(m, q, eta).powi(2));
    }
    acc.value()
}

fn check_q(q: u64, eta: u32, eps: f64) -> Result<()> {
    if q == 0 {
        return domain("modulus must be >= 1");
    }
    if eta > 1 {
        return domain(format!("eta must be 0 or 1, got {eta}"));
    }
    if !(eps > 0.0) {
        return domain("eps must be positive");
    }
    Ok(())
}

/// Model value `sum_n f(n) w_n`, truncated as for the theta series.
pub fn model_theta(q: u64, sample: &SteinhausSample, eta: u32, eps: f64) -> Result<Complex<f64>> {
    check_q(q, eta, eps)?;
    let n = truncation_length(q, 1.0, eta, eps);
    if sample.support < n {
        return domain(format!(
            "sample support {} is below the truncation length {n}",
            sample.support
        ));
    }
    let mut acc = ComplexSum::new();
    for m in 1..=n {
        acc.add(sample.values[m] * weight(m, q, eta));
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMomentEstimate {
    pub q: u64,
    pub k: u32,
    pub eta: u32,
    pub samples: usize,
    pub seed: u64,
    pub eps: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub median_of_means: f64,
    /// `sum_n w_n^2`, the exact `k = 1` expectation.
    pub weight_square_sum: f64,
    pub normalization: f64,
    pub normalized: f64,
}

/// Monte-Carlo estimate of `E |sum_n f(n) w_n|^{2k}`; sample `i` uses seed `seed + i`.
pub fn model_moment(q: u64, k: u32, samples: usize, seed: u64, eps: f64, eta: u32) -> Result<ModelMomentEstimate> {
    check_q(q, eta, eps)?;
    if samples < MIN_SAMPLES {
        return domain(format!("need at least {MIN_SAMPLES} samples, got {samples}"));
    }
    let support = truncation_length(q, 1.0, eta, eps).max(2);
    let primes = sieve(support)?;
    let draws: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let sample = SteinhausSample::with_table(&primes, seed.wrapping_add(i as u64));
            model_theta(q, &sample, eta, eps).map(|z| z.norm().powi(2 * k as i32))
        })
        .collect::<Result<_>>()?;

    let n = samples as f64;
    let mut sum = CompensatedSum::new();
    sum.extend(draws.iter().copied());
    let mean = sum.value();
    let mean = mean / n;
    let mut sq = CompensatedSum::new();
    sq.extend(draws.iter().map(|d| (d - mean).powi(2)));
    let variance = sq.value() / (n - 1.0);

    let block = samples / MEDIAN_BLOCKS;
    let mut block_means: Vec<f64> = draws
        .chunks(block)
        .take(MEDIAN_BLOCKS)
        .map(|c| canonical_sum(c.to_vec()) / c.len() as f64)
        .collect();
    block_means.sort_by(f64::total_cmp);
    let median_of_means = if MEDIAN_BLOCKS % 2 == 1 {
        block_means[MEDIAN_BLOCKS / 2]
    } else {
        0.5 * (block_means[MEDIAN_BLOCKS / 2 - 1] + block_means[MEDIAN_BLOCKS / 2])
    };

    let qf = q as f64;
    let power = if eta == 0 { 0.5 } else { 1.5 } * k as f64;
    let km1 = k as i32 - 1;
    let normalization = qf.powf(power) * qf.ln().powi(km1 * km1);
    Ok(ModelMomentEstimate {
        q,
        k,
        eta,
        samples,
        seed,
        eps,
        estimate: mean,
        std_error: (variance / n).sqrt(),
        median_of_means,
        weight_square_sum: weight_square_sum(q, eta, eps),
        normalization,
        normalized: mean / normalization,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_is_unimodular_and_multiplicative() {
        let s = SteinhausSample::new(500, 7).unwrap();
        for n in 1..=500 {
            assert!((s.value(n).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        let f = |n| s.value(n).unwrap();
        assert!((f(4) - f(2) * f(2)).norm() < 1e-15);
        for m in 1..=22usize {
            for n in 1..=22usize {
                assert!((f(m * n) - f(m) * f(n)).norm() < 1e-12);
            }
        }
        assert_eq!(s.value(0), None);
        assert_eq!(s.value(501), None);
        assert!(SteinhausSample::new(1, 0).is_err());
    }

    #[test]
    fn same_seed_same_sample() {
        assert_eq!(SteinhausSample::new(300, 42).unwrap(), SteinhausSample::new(300, 42).unwrap());
        assert_ne!(SteinhausSample::new(300, 42).unwrap(), SteinhausSample::new(300, 43).unwrap());
    }

    #[test]
    fn trivial_sample_gives_unit_weights() {
        let primes = sieve(100).unwrap();
        let mut s = SteinhausSample::with_table(&primes, 0);
        s.values.iter_mut().skip(1).for_each(|v| *v = Complex::new(1.0, 0.0));
        let q = 101;
        let n = truncation_length(q, 1.0, 0, 1e-14);
        let direct: f64 = (1..=n).map(|m| weight(m, q, 0)).sum();
        let model = model_theta(q, &s, 0, 1e-14).unwrap();
        assert!((model.re - direct).abs() < 1e-13);
        assert_eq!(model.im, 0.0);
    }

    #[test]
    fn support_too_small() {
        let s = SteinhausSample::new(3, 1).unwrap();
        assert!(model_theta(1009, &s, 0, 1e-12).is_err());
    }

    #[test]
    fn off_diagonal_correlations_vanish() {
        let primes = sieve(12).unwrap();
        let samples = 4000;
        let draws: Vec<SteinhausSample> = (0..samples).map(|i| SteinhausSample::with_table(&primes, i)).collect();
        for (m, n) in [(2usize, 3usize), (4, 6), (5, 10), (2, 4)] {
            let mut acc = Complex::new(0.0, 0.0);
            for s in &draws {
                acc += s.value(m).unwrap() * s.value(n).unwrap().conj();
            }
            assert!((acc / samples as f64).norm() < 4.0 / (samples as f64).sqrt());
        }
    }

    #[test]
    fn second_moment_matches_weights() {
        let est = model_moment(101, 1, 2000, 11, 1e-12, 0).unwrap();
        assert!(est.estimate >= 0.0);
        assert!((est.estimate - est.weight_square_sum).abs() <= 3.0 * est.std_error);
        let again = model_moment(101, 1, 2000, 11, 1e-12, 0).unwrap();
        assert_eq!(est, again);
        assert!(model_moment(101, 1, 99, 11, 1e-12, 0).is_err());
    }
}

//! Hurwitz zeta and complex log-Gamma with explicit error bounds.

use num_complex::Complex;

pub use crate::approx::ComplexApprox;
use crate::error::{domain, Error, Result};
use crate::scalar::Real;
use crate::sum::ComplexSum;

/// `B_2, B_4, .., B_30`.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Largest usable correction order (needs `B_{2M}`).
pub const MAX_CORRECTION_ORDER: usize = 15;

fn bernoulli<T: Real>(j: usize) -> T {
    T::lit(BERNOULLI_EVEN[j - 1])
}

/// Euler-Maclaurin parameters for the Hurwitz zeta function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerMaclaurinConfig {
    /// Terms summed directly.
    pub shift: usize,
    /// Bernoulli correction terms.
    pub order: usize,
    pub target_tol: f64,
}

impl EulerMaclaurinConfig {
    /// Default starting point: `N = max(ceil|s|, 10)`, `M = 10`.
    pub fn initial(s_abs: f64, target_tol: f64) -> Self {
        Self {
            shift: (s_abs.ceil() as usize).max(10),
            order: 10,
            target_tol,
        }
    }
}

const MAX_SHIFT: usize = 1 << 22;

/// `(e^u - 1) / u`, stable near 0.
fn expm1_over<T: Real>(u: Complex<T>) -> Complex<T> {
    if u.norm() < T::lit(0.5) {
        let mut term = Complex::new(T::one(), T::zero());
        let mut acc = term;
        for k in 2..30 {
            term = term * u / T::from_usize_lossy(k);
            acc = acc + term;
        }
        acc
    } else {
        (u.exp() - T::one()) / u
    }
}

/// Remainder bound `4 |(s)_{2M}| / (2 pi)^{2M} * x^{1 - sigma - 2M} / (sigma + 2M - 1)`.
fn em_remainder<T: Real>(s: Complex<T>, x: T, m: usize) -> T {
    let sigma = s.re;
    let denom = sigma + T::from_usize_lossy(2 * m) - T::one();
    if denom <= T::zero() {
        return T::infinity();
    }
    let mut log_rising = T::zero();
    for k in 0..2 * m {
        log_rising = log_rising + (s + T::from_usize_lossy(k)).norm().ln();
    }
    let two_m = T::from_usize_lossy(2 * m);
    let log_bound = T::lit(4.0).ln() + log_rising - two_m * T::TAU().ln()
        + (T::one() - sigma - two_m) * x.ln()
        - denom.ln();
    log_bound.exp()
}

fn choose_parameters<T: Real>(s: Complex<T>, a: T, tol: T) -> (EulerMaclaurinConfig, T) {
    let mut cfg = EulerMaclaurinConfig::initial(s.norm().to_f64_lossy(), tol.to_f64_lossy());
    loop {
        let x = a + T::from_usize_lossy(cfg.shift);
        let mut best = em_remainder(s, x, cfg.order);
        if best <= tol {
            return (cfg, best);
        }
        for m in cfg.order + 1..=MAX_CORRECTION_ORDER {
            let r = em_remainder(s, x, m);
            if r < best {
                best = r;
                cfg.order = m;
            }
            if best <= tol {
                return (cfg, best);
            }
        }
        if cfg.shift >= MAX_SHIFT {
            return (cfg, best);
        }
        cfg.shift = (cfg.shift * 3 / 2).min(MAX_SHIFT);
        cfg.order = 10;
    }
}

/// Euler-Maclaurin evaluation; `regularized` drops the `1/(s-1)` pole part.
fn hurwitz_em<T: Real>(s: Complex<T>, a: T, tol: T, regularized: bool) -> ComplexApprox<T> {
    let (cfg, remainder) = choose_parameters(s, a, tol * T::lit(0.5));
    let n = cfg.shift;
    let one = Complex::new(T::one(), T::zero());
    let eps = T::epsilon();
    let s_abs = s.norm();

    let mut acc = ComplexSum::new();
    let mut magnitude = T::zero();
    for k in 0..n {
        let base = a + T::from_usize_lossy(k);
        let ln = base.ln();
        let term = (-s * ln).exp();
        let size = term.norm();
        magnitude = magnitude + size * (T::lit(2.0) + s_abs * ln.abs());
        acc.add(term);
    }

    let x = a + T::from_usize_lossy(n);
    let ln_x = x.ln();
    let x_pow = (-s * ln_x).exp(); // x^{-s}
    let tail = if regularized {
        // (x^{1-s} - 1)/(s - 1) = -ln x * (e^u - 1)/u, u = (1-s) ln x
        let u = (one - s) * ln_x;
        -expm1_over(u) * ln_x
    } else {
        x_pow * x / (s - one)
    };
    acc.add(tail);
    acc.add(x_pow * T::lit(0.5));
    magnitude = magnitude + (tail.norm() + x_pow.norm()) * (T::lit(2.0) + s_abs * ln_x.abs());

    // B_{2j}/(2j)! (s)_{2j-1} x^{-s-2j+1}
    let x_inv2 = T::one() / (x * x);
    let mut rising = s; // (s)_{2j-1}
    let mut fact = T::lit(2.0); // (2j)!
    let mut power = x_pow / x; // x^{-s-1}
    for j in 1..=cfg.order {
        let term = rising * power * (bernoulli::<T>(j) / fact);
        magnitude = magnitude + term.norm();
        acc.add(term);
        let k = T::from_usize_lossy(2 * j);
        rising = rising * (s + k - T::one()) * (s + k);
        fact = fact * (k + T::one()) * (k + T::lit(2.0));
        power = power * x_inv2;
    }

    let rounding = T::lit(4.0) * eps * magnitude;
    ComplexApprox::new(acc.value(), remainder + rounding)
}

fn check_hurwitz_args<T: Real>(s: Complex<T>, a: T, tol: T) -> Result<()> {
    if !(tol > T::zero()) {
        return domain("tolerance must be positive");
    }
    if !(a > T::zero() && a <= T::one()) {
        return domain(format!("Hurwitz parameter a must lie in (0, 1], got {a}"));
    }
    if !(s.re > T::zero()) {
        return domain(format!("Hurwitz zeta needs Re s > 0, got {s}"));
    }
    Ok(())
}

fn enforce<T: Real>(v: ComplexApprox<T>, tol: T) -> Result<ComplexApprox<T>> {
    if v.abs_error <= tol {
        Ok(v)
    } else {
        Err(Error::Precision {
            requested: tol.to_f64_lossy(),
            achieved: v.abs_error.to_f64_lossy(),
            re: v.value.re.to_f64_lossy(),
            im: v.value.im.to_f64_lossy(),
        })
    }
}

/// Hurwitz zeta `zeta(s, a) = sum_{n >= 0} (n + a)^{-s}` for `Re s > 0`, `0 < a <= 1`.
pub fn hurwitz_zeta<T: Real>(s: Complex<T>, a: T, tol: T) -> Result<ComplexApprox<T>> {
    check_hurwitz_args(s, a, tol)?;
    if s.re == T::one() && s.im == T::zero() {
        return Err(Error::Pole("Hurwitz zeta has a pole at s = 1".into()));
    }
    enforce(hurwitz_em(s, a, tol, false), tol)
}

/// `zeta(s, a) - 1/(s - 1)`, entire in `s`; at `s = 1` it equals `-digamma(a)`.
pub fn hurwitz_zeta_regularized<T: Real>(s: Complex<T>, a: T, tol: T) -> Result<ComplexApprox<T>> {
    check_hurwitz_args(s, a, tol)?;
    enforce(hurwitz_em(s, a, tol, true), tol)
}

/// Best-effort regularized value: the error bound is reported, never enforced.
pub(crate) fn hurwitz_regularized_unchecked<T: Real>(s: Complex<T>, a: T, tol: T) -> ComplexApprox<T> {
    hurwitz_em(s, a, tol, true)
}

/// Principal branch of `log Gamma(s)` for `Re s > 0`.
///
/// Shifts to `Re z >= 10` with the recurrence, then applies the Stirling
/// series; the truncation bound carries the `sec^{2M+2}(arg z / 2)` factor.
pub fn log_gamma<T: Real>(s: Complex<T>) -> Result<ComplexApprox<T>> {
    if !(s.re > T::zero()) {
        if s.im == T::zero() {
            return domain(format!("log Gamma undefined on the non-positive real axis (s = {s})"));
        }
        return domain(format!("log Gamma needs Re s > 0, got {s}"));
    }
    let eps = T::epsilon();
    let ten = T::lit(10.0);
    let shift = if s.re < ten {
        (ten - s.re).ceil().to_usize().unwrap_or(0)
    } else {
        0
    };

    let mut correction = ComplexSum::new();
    let mut magnitude = T::zero();
    for k in 0..shift {
        let l = (s + T::from_usize_lossy(k)).ln();
        magnitude = magnitude + l.norm();
        correction.add(l);
    }

    let z = s + T::from_usize_lossy(shift);
    let half = T::lit(0.5);
    let ln_z = z.ln();
    let main = (z - half) * ln_z - z + T::TAU().ln() * half;
    magnitude = magnitude + main.norm() + (z.norm() * ln_z.norm());

    let m = 10usize;
    let z_inv = z.inv();
    let z_inv2 = z_inv * z_inv;
    let mut power = z_inv;
    let mut series = ComplexSum::new();
    series.add(main);
    for j in 1..=m {
        let jj = T::from_usize_lossy(2 * j);
        series.add(power * (bernoulli::<T>(j) / (jj * (jj - T::one()))));
        power = power * z_inv2;
    }
    let jj = T::from_usize_lossy(2 * m + 2);
    let sec_half = T::one() / (z.arg() * half).cos();
    let trunc = bernoulli::<T>(m + 1).abs() / (jj * (jj - T::one()))
        * z.norm().powi(-(2 * m as i32 + 1))
        * sec_half.powi(2 * m as i32 + 2);

    let value = series.value() - correction.value();
    let err = trunc + T::lit(8.0) * eps * magnitude;
    Ok(ComplexApprox::new(value, err))
}

/// `Gamma(s)` for `Re s > 0`; the error is the log-scale bound carried through `exp`.
pub fn gamma<T: Real>(s: Complex<T>) -> Result<ComplexApprox<T>> {
    let lg = log_gamma(s)?;
    let value = lg.value.exp();
    let err = value.norm() * (lg.abs_error.exp() - T::one()) + T::lit(4.0) * T::epsilon() * value.norm();
    Ok(ComplexApprox::new(value, err))
}

//! Dirichlet L-values on the critical line and the L-side aggregates:
//! central and shifted moments, large-value counts and the GRH majorant.
//!
//! `L(s, chi) = q^{-s} sum_{a=1}^{q} chi(a) zeta(s, a/q)`. The Hurwitz vector
//! is shared by every character, so all `phi(q)` values at one `s` cost one
//! Hurwitz sweep plus one character-group transform.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::ComplexApprox;
use crate::bounds;
use crate::characters::CharacterGroup;
use crate::error::{domain, Error, Result};
use crate::numtheory::{gcd, PrimeTable};
use crate::report::{canonical_sum, Family, MomentReport};
use crate::scalar::Real;
use crate::specfun::hurwitz_regularized_unchecked;
use crate::sum::ComplexSum;
use crate::transform::CharacterTransform;

impl TryFrom<Vec<f64>> for ShiftTuple {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ShiftTuple> for Vec<f64> {
    fn from(t: ShiftTuple) -> Self {
        t.shifts
    }
}

/// Pairs with `|t_i - t_j|` at most this are "close".
pub const CLOSE_THRESHOLD: f64 = 1.0 / 100.0;

/// Largest admissible `|t|` for shifted evaluations.
pub const MAX_SHIFT: f64 = 50.0;

/// `log|L|` substituted when `|L|` is below its own error bound.
pub const LOG_FLOOR: f64 = -50.0;

/// Sorted `2k`-tuple of real shifts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ShiftTuple {
    shifts: Vec<f64>,
}

impl ShiftTuple {
    pub fn new(mut shifts: Vec<f64>) -> Result<Self> {
        if shifts.is_empty() || shifts.len() % 2 != 0 {
            return domain(format!(
                "shift tuple must have even positive length, got {}",
                shifts.len()
            ));
        }
        if shifts.iter().any(|t| !t.is_finite()) {
            return domain("shifts must be finite");
        }
        shifts.sort_by(f64::total_cmp);
        Ok(Self { shifts })
    }

    /// `(0, .., 0)` with `2k` entries.
    pub fn central(k: usize) -> Result<Self> {
        Self::new(vec![0.0; 2 * k])
    }

    pub fn shifts(&self) -> &[f64] {
        &self.shifts
    }

    pub fn k(&self) -> usize {
        self.shifts.len() / 2
    }

    pub fn max_abs(&self) -> f64 {
        self.shifts.iter().fold(0.0, |m, t| m.max(t.abs()))
    }

    pub fn negated(&self) -> Self {
        Self::new(self.shifts.iter().map(|t| -t).collect()).expect("valid")
    }

    /// `(i, j, |t_i - t_j|, close)` for `i < j`.
    pub fn pairs(&self) -> Vec<(usize, usize, f64, bool)> {
        let n = self.shifts.len();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let d = (self.shifts[i] - self.shifts[j]).abs();
                out.push((i, j, d, d <= CLOSE_THRESHOLD));
            }
        }
        out
    }
}

fn units_of(q: u64) -> Vec<u64> {
    // residues a in 1..=q coprime to q; for q = 1 this is [1]
    (1..=q).filter(|&a| gcd(a, q) == 1).collect()
}

fn check_s<T: Real>(s: Complex<T>, tol: T) -> Result<()> {
    if !(tol > T::zero()) {
        return domain("tolerance must be positive");
    }
    if !(s.re > T::zero()) {
        return domain(format!("L-values are evaluated for Re s > 0, got {s}"));
    }
    Ok(())
}

fn pole_part<T: Real>(group: &CharacterGroup, s: Complex<T>) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    if s == one {
        return Err(Error::Pole(format!(
            "L(s, chi_0) mod {} has a pole at s = 1",
            group.modulus()
        )));
    }
    Ok(Complex::new(T::from_usize_lossy(group.len()), T::zero()) / (s - one))
}

/// `L(s, chi)` by direct summation over the Hurwitz decomposition.
pub fn l_value<T: Real>(group: &CharacterGroup, chi: usize, s: Complex<T>, tol: T) -> Result<ComplexApprox<T>> {
    check_s(s, tol)?;
    let q = group.modulus();
    let qf = T::lit(q as f64);
    let per_term = tol / (T::lit(2.0) * qf);
    let roots = group.root_table::<T>();
    let mut acc = ComplexSum::new();
    let mut err = T::zero();
    let mut magnitude = T::zero();
    for a in units_of(q) {
        let u = group.structure().flat_index(a).expect("unit");
        let c = roots[group.phase_at_unit(chi, u) as usize];
        let z = hurwitz_regularized_unchecked(s, T::lit(a as f64) / qf, per_term);
        err = err + z.abs_error;
        magnitude = magnitude + z.value.norm();
        acc.add(c * z.value);
    }
    let mut sum = acc.value();
    if chi == 0 {
        sum = sum + pole_part(group, s)?;
    }
    let scale = (-s * qf.ln()).exp();
    let rounding = T::lit(4.0) * T::epsilon() * magnitude;
    Ok(ComplexApprox::new(sum * scale, (err + rounding) * scale.norm()))
}

/// `L(s, chi)` for every character mod `q`, indexed like the group.
pub fn l_values_all_chars<T: Real>(group: &CharacterGroup, s: Complex<T>, tol: T) -> Result<Vec<ComplexApprox<T>>> {
    let transform = CharacterTransform::new(group);
    l_values_with(group, &transform, s, tol)
}

pub(crate) fn l_values_with<T: Real>(
    group: &CharacterGroup,
    transform: &CharacterTransform<T>,
    s: Complex<T>,
    tol: T,
) -> Result<Vec<ComplexApprox<T>>> {
    check_s(s, tol)?;
    let q = group.modulus();
    let qf = T::lit(q as f64);
    let per_term = tol / (T::lit(2.0) * qf);
    let structure = group.structure();
    let zetas: Vec<ComplexApprox<T>> = (0..group.len())
        .into_par_iter()
        .map(|u| {
            let a = match structure.unit(u) {
                0 => q, // q = 1
                r => r,
            };
            hurwitz_regularized_unchecked(s, T::lit(a as f64) / qf, per_term)
        })
        .collect();
    let err: T = zetas.iter().fold(T::zero(), |e, z| e + z.abs_error);
    let magnitude: T = zetas.iter().fold(T::zero(), |m, z| m + z.value.norm());
    let mut data: Vec<Complex<T>> = zetas.iter().map(|z| z.value).collect();
    transform.apply(&mut data);

    let scale = (-s * qf.ln()).exp();
    let levels = T::lit((group.len().max(2) as f64).log2().ceil() + 4.0);
    let total_err = (err + T::lit(4.0) * T::epsilon() * levels * magnitude) * scale.norm();
    // the principal character picks up the pole part phi(q)/(s-1); undefined at s = 1
    let principal = if s == Complex::new(T::one(), T::zero()) {
        Complex::new(T::nan(), T::nan())
    } else {
        data[0] + pole_part(group, s)?
    };
    data[0] = principal;
    Ok(data
        .into_iter()
        .map(|v| ComplexApprox::new(v * scale, total_err))
        .collect())
}

/// Values of `L` at several points for a set of characters.
#[derive(Debug, Clone)]
pub struct LValueGrid<T: Real> {
    pub q: u64,
    pub characters: Vec<usize>,
    pub points: Vec<Complex<T>>,
    /// `values[c][p]`: character `characters[c]` at `points[p]`.
    pub values: Vec<Vec<ComplexApprox<T>>>,
}

impl<T: Real> LValueGrid<T> {
    pub fn compute(group: &CharacterGroup, characters: &[usize], points: &[Complex<T>], tol: T) -> Result<Self> {
        let transform = CharacterTransform::new(group);
        let columns: Vec<Vec<ComplexApprox<T>>> = points
            .iter()
            .map(|&s| l_values_with(group, &transform, s, tol))
            .collect::<Result<_>>()?;
        let values = characters
            .iter()
            .map(|&c| columns.iter().map(|col| col[c]).collect())
            .collect();
        Ok(Self {
            q: group.modulus(),
            characters: characters.to_vec(),
            points: points.to_vec(),
            values,
        })
    }
}

/// `|L(1/2 + i t, chi)|` and its error for every character, for each shift.
///
/// Only `|t|` is evaluated; negative shifts use
/// `L(1/2 - i t, chi) = conj L(1/2 + i t, conj chi)`, so `t -> -t` reuses
/// exactly the same numbers.
fn critical_moduli(group: &CharacterGroup, shifts: &[f64], tol: f64) -> Result<Vec<Vec<(f64, f64)>>> {
    let transform = CharacterTransform::<f64>::new(group);
    let mut distinct: Vec<f64> = shifts.iter().map(|t| t.abs()).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let columns: Vec<Vec<ComplexApprox<f64>>> = distinct
        .iter()
        .map(|&t| l_values_with(group, &transform, Complex::new(0.5, t), tol))
        .collect::<Result<_>>()?;
    Ok(shifts
        .iter()
        .map(|&t| {
            let col = &columns[distinct.binary_search_by(|d| d.total_cmp(&t.abs())).unwrap()];
            (0..group.len())
                .map(|chi| {
                    // |L(1/2, chi)| = |L(1/2, conj chi)|: read one copy so
                    // t and -t give identical summands
                    let src = if t < 0.0 {
                        group.conjugate(chi)
                    } else if t == 0.0 {
                        chi.min(group.conjugate(chi))
                    } else {
                        chi
                    };
                    (col[src].norm(), col[src].abs_error)
                })
                .collect()
        })
        .collect())
}

/// `M_{2k}(q) = sum_{chi primitive} |L(1/2, chi)|^{2k}`, normalized by `q log^{k^2} q`.
pub fn central_moment(group: &CharacterGroup, k: u32, tol: f64) -> Result<MomentReport> {
    let q = group.modulus();
    let members = Family::Star.members(group);
    let (raw, near_zero) = if k == 0 {
        (members.len() as f64, 0)
    } else {
        let moduli = critical_moduli(group, &[0.0], tol)?;
        let col = &moduli[0];
        let near_zero = members.iter().filter(|&&c| col[c].0 <= col[c].1).count();
        let raw = canonical_sum(members.iter().map(|&c| col[c].0.powi(2 * k as i32)).collect());
        (raw, near_zero)
    };
    let normalization = q as f64 * (q as f64).ln().powi((k * k) as i32);
    Ok(MomentReport {
        q,
        k,
        family: Family::Star,
        raw,
        normalization,
        ratio: raw / normalization,
        eps: tol,
        family_size: members.len(),
        empty: members.is_empty(),
        near_zero,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftedMomentReport {
    pub q: u64,
    pub k: usize,
    pub shifts: Vec<f64>,
    pub family: Family,
    pub family_size: usize,
    pub raw: f64,
    /// Product bound with implied constant 1; absent when `q < 16`.
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    /// Exponent slack `eps` used in the bound.
    pub bound_eps: f64,
    pub tol: f64,
}

impl ShiftedMomentReport {
    pub const CSV_HEADER: &'static str = "q,k,shifts,family,family_size,raw,bound,ratio,bound_eps,tol";

    pub fn csv_row(&self) -> String {
        let shifts: Vec<String> = self.shifts.iter().map(|t| format!("{t}")).collect();
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.17e}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{:.17e},{},{},{},{:e}",
            self.q,
            self.k,
            shifts.join(";"),
            self.family,
            self.family_size,
            self.raw,
            opt(self.bound),
            opt(self.ratio),
            self.bound_eps,
            self.tol
        )
    }
}

fn check_window(t: &ShiftTuple) -> Result<()> {
    if t.max_abs() > MAX_SHIFT {
        return domain(format!("shifts must satisfy |t| <= {MAX_SHIFT}, got {}", t.max_abs()));
    }
    Ok(())
}

/// `sum_chi prod_i |L(1/2 + i t_i, chi)|` over the chosen family.
pub fn shifted_moment(
    group: &CharacterGroup,
    t: &ShiftTuple,
    tol: f64,
    family: Family,
    bound_eps: f64,
) -> Result<ShiftedMomentReport> {
    check_window(t)?;
    let q = group.modulus();
    let members = family.members(group);
    let moduli = critical_moduli(group, t.shifts(), tol)?;
    let summands: Vec<f64> = members
        .iter()
        .map(|&c| {
            let mut factors: Vec<f64> = moduli.iter().map(|col| col[c].0).collect();
            factors.sort_by(f64::total_cmp);
            factors.into_iter().product()
        })
        .collect();
    let raw = canonical_sum(summands);
    let bound = if q >= 16 {
        Some(bounds::shifted_moment_bound(q, t, bound_eps)?)
    } else {
        None
    };
    Ok(ShiftedMomentReport {
        q,
        k: t.k(),
        shifts: t.shifts().to_vec(),
        family,
        family_size: members.len(),
        raw,
        bound,
        ratio: bound.map(|b| raw / b),
        bound_eps,
        tol,
    })
}

/// Counts `N_t(q, V)` on a grid of thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LargeValueHistogram {
    pub q: u64,
    pub shifts: Vec<f64>,
    pub family: Family,
    pub family_size: usize,
    pub v_grid: Vec<f64>,
    pub counts: Vec<usize>,
    /// Characters whose `log|L|` was clamped to the floor at some shift.
    pub clamped: Vec<usize>,
    /// True when quadratic characters are excluded.
    pub excludes_quadratic: bool,
}

impl LargeValueHistogram {
    pub const CSV_HEADER: &'static str = "q,V,count,family_size";

    pub fn csv_rows(&self) -> Vec<String> {
        self.v_grid
            .iter()
            .zip(&self.counts)
            .map(|(v, n)| format!("{},{:.17e},{},{}", self.q, v, n, self.family_size))
            .collect()
    }
}

/// `sum_i log|L(1/2 + i t_i, chi)|` per family member, with the clamp flag.
pub fn log_sums(group: &CharacterGroup, t: &ShiftTuple, tol: f64, family: Family) -> Result<Vec<(usize, f64, bool)>> {
    check_window(t)?;
    let moduli = critical_moduli(group, t.shifts(), tol)?;
    Ok(family
        .members(group)
        .into_iter()
        .map(|c| {
            let mut clamped = false;
            let mut logs: Vec<f64> = moduli
                .iter()
                .map(|col| {
                    let (m, e) = col[c];
                    if m < e || m == 0.0 {
                        clamped = true;
                        LOG_FLOOR
                    } else {
                        m.ln().max(LOG_FLOOR)
                    }
                })
                .collect();
            logs.sort_by(f64::total_cmp);
            (c, crate::sum::compensated_sum(logs), clamped)
        })
        .collect())
}

pub fn large_value_counts(
    group: &CharacterGroup,
    t: &ShiftTuple,
    v_grid: &[f64],
    tol: f64,
    family: Family,
) -> Result<LargeValueHistogram> {
    if v_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return domain("V grid must be ascending");
    }
    let sums = log_sums(group, t, tol, family)?;
    let counts = v_grid
        .iter()
        .map(|&v| sums.iter().filter(|(_, s, _)| *s >= v).count())
        .collect();
    Ok(LargeValueHistogram {
        q: group.modulus(),
        shifts: t.shifts().to_vec(),
        family,
        family_size: sums.len(),
        v_grid: v_grid.to_vec(),
        counts,
        clamped: sums.iter().filter(|s| s.2).map(|s| s.0).collect(),
        excludes_quadratic: matches!(family, Family::Nonquadratic | Family::PrimitiveNonquadratic),
    })
}

/// The positive root of `e^{-lambda} = lambda`, by bisection.
pub fn lambda0() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (-mid).exp() > mid {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Parameters of the GRH majorant for `log|L(1/2 + it, chi)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MajorantParams {
    pub t: f64,
    pub x: f64,
    pub lambda: f64,
    /// Keep only primes (the prime-restricted form); otherwise all prime powers.
    pub primes_only: bool,
    /// Height parameter in `log^+ T`; defaults to `|t|`.
    pub height: Option<f64>,
}

/// `Re sum_{n<=x} chi(n) Lambda(n) / (n^{1/2 + lambda/log x + it} log n) * log(x/n)/log x
///  + (1 + lambda)/2 * (log q + log^+ T) / log x`.
pub fn grh_majorant(group: &CharacterGroup, primes: &PrimeTable, chi: usize, p: &MajorantParams) -> Result<f64> {
    if !(p.lambda >= lambda0()) {
        return domain(format!("lambda must be >= lambda0 = {:.6}, got {}", lambda0(), p.lambda));
    }
    if !(p.x >= 2.0) {
        return domain(format!("x must be >= 2, got {}", p.x));
    }
    let xmax = p.x.floor() as usize;
    if xmax > primes.limit() {
        return domain(format!("prime table limit {} below x = {}", primes.limit(), p.x));
    }
    let log_x = p.x.ln();
    let sigma = 0.5 + p.lambda / log_x;
    let mut terms = Vec::new();
    for n in 2..=xmax {
        let Some((_, e)) = primes.prime_power(n) else { continue };
        if p.primes_only && e > 1 {
            continue;
        }
        let c = group.eval_complex::<f64>(chi, n as i64);
        if c.norm() == 0.0 {
            continue;
        }
        let ln_n = (n as f64).ln();
        let n_pow = Complex::new(-sigma * ln_n, -p.t * ln_n).exp();
        let w = (p.x / n as f64).ln() / log_x / e as f64;
        terms.push((c * n_pow).re * w);
    }
    let height = p.height.unwrap_or(p.t.abs());
    let log_plus = if height > 1.0 { height.ln() } else { 0.0 };
    let q = group.modulus() as f64;
    let tail = 0.5 * (1.0 + p.lambda) * (q.ln() + log_plus) / log_x;
    Ok(crate::sum::compensated_sum(terms) + tail)
}

/// One row of the majorant diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorantRow {
    pub chi: usize,
    pub log_abs_l: f64,
    pub majorant: f64,
    /// `majorant + slack - log|L|`; negative means a violation.
    pub margin: f64,
}

/// Compares `log|L(1/2 + it, chi)|` with the majorant for every member of `family`.
pub fn majorant_scan(
    group: &CharacterGroup,
    primes: &PrimeTable,
    family: Family,
    params: &MajorantParams,
    slack: f64,
    tol: f64,
) -> Result<Vec<MajorantRow>> {
    let t = ShiftTuple::new(vec![params.t, params.t])?;
    let moduli = critical_moduli(group, &t.shifts()[..1], tol)?;
    family
        .members(group)
        .into_iter()
        .map(|chi| {
            let m = moduli[0][chi].0;
            let log_abs_l = if m > 0.0 { m.ln() } else { LOG_FLOOR };
            let majorant = grh_majorant(group, primes, chi, params)?;
            Ok(MajorantRow {
                chi,
                log_abs_l,
                majorant,
                margin: majorant + slack - log_abs_l,
            })
        })
        .collect()
}

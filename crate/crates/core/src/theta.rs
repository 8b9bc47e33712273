//! Theta functions of Dirichlet characters, their moments and the Mellin check.
//!
//! `theta(eta, x, chi) = sum_{n >= 1} chi(n) n^eta exp(-pi n^2 x / q)`. The
//! classical theta function of `chi` takes `eta = 0` for even and `eta = 1`
//! for odd characters; "theta(1, chi)" below always means `x = 1` with that
//! parity-matched `eta`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::ComplexApprox;
use crate::characters::{CharacterGroup, Parity};
use crate::error::{domain, Result};
use crate::lfunc::l_value;
use crate::report::{canonical_sum, Family, MomentReport};
use crate::scalar::Real;
use crate::specfun::gamma;
use crate::sum::{CompensatedSum, ComplexSum};
use crate::transform::CharacterTransform;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaRequest {
    pub q: u64,
    pub x: f64,
    pub eta: u32,
    pub eps: f64,
}

impl ThetaRequest {
    pub fn new(q: u64, x: f64, eta: u32, eps: f64) -> Result<Self> {
        if q == 0 {
            return domain("modulus must be >= 1");
        }
        if !(x > 0.0) {
            return domain(format!("x must be positive, got {x}"));
        }
        if !(eps > 0.0) {
            return domain(format!("eps must be positive, got {eps}"));
        }
        if eta > 1 {
            return domain(format!("eta must be 0 or 1, got {eta}"));
        }
        Ok(Self { q, x, eta, eps })
    }
}

/// Geometric tail bound for `sum_{n > N} n^eta exp(-pi n^2 x / q)`.
///
/// From `n = N+1` on, consecutive terms shrink at least by
/// `r = ((N+2)/(N+1))^eta exp(-pi (2N+3) x / q)`; infinite when `r >= 1`.
pub fn tail_bound(q: u64, x: f64, eta: u32, n: usize) -> f64 {
    let c = std::f64::consts::PI * x / q as f64;
    let n1 = (n + 1) as f64;
    let ratio = ((n1 + 1.0) / n1).powi(eta as i32) * (-c * (2.0 * n1 + 1.0)).exp();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    n1.powi(eta as i32) * (-c * n1 * n1).exp() / (1.0 - ratio)
}

/// Smallest `N` whose tail bound is at most `eps`.
pub fn truncation_length(q: u64, x: f64, eta: u32, eps: f64) -> usize {
    // the bound is non-increasing in N, so bisect
    let mut hi = 1usize;
    while tail_bound(q, x, eta, hi) > eps {
        hi *= 2;
    }
    let mut lo = 0usize;
    if tail_bound(q, x, eta, lo) <= eps {
        return 0;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail_bound(q, x, eta, mid) <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn weight<T: Real>(n: usize, eta: u32, c: T) -> T {
    let nf = T::from_usize_lossy(n);
    let g = (-c * nf * nf).exp();
    if eta == 1 {
        g * nf
    } else {
        g
    }
}

/// `theta(eta, x, chi)` by direct summation, with absolute error at most `eps` (plus rounding).
pub fn theta_eta<T: Real>(group: &CharacterGroup, chi: usize, eta: u32, x: f64, eps: f64) -> Result<ComplexApprox<T>> {
    let req = ThetaRequest::new(group.modulus(), x, eta, eps)?;
    let n_max = truncation_length(req.q, x, eta, 0.5 * eps);
    let c = T::lit(std::f64::consts::PI * x / req.q as f64);
    let roots = group.root_table::<T>();
    let structure = group.structure();
    let mut acc = ComplexSum::new();
    let mut magnitude = T::zero();
    for n in 1..=n_max {
        let Some(u) = structure.flat_index(n as u64) else { continue };
        let w = weight::<T>(n, eta, c);
        magnitude = magnitude + w;
        acc.add(roots[group.phase_at_unit(chi, u) as usize] * w);
    }
    let err = T::lit(tail_bound(req.q, x, eta, n_max)) + T::lit(4.0) * T::epsilon() * magnitude;
    Ok(ComplexApprox::new(acc.value(), err))
}

/// Classical theta value: `eta` matched to the parity of `chi`.
pub fn theta_value<T: Real>(group: &CharacterGroup, chi: usize, x: f64, eps: f64) -> Result<ComplexApprox<T>> {
    theta_eta(group, chi, group.parity(chi).bit(), x, eps)
}

/// Classical theta values for all characters mod `q` via the group transform.
///
/// The residue-class weights `w_a = sum_{n = a (q)} n^eta exp(-pi n^2 x / q)`
/// are built once per parity and transformed; each character then reads the
/// entry of its own parity.
pub fn theta_all_chars<T: Real>(group: &CharacterGroup, x: f64, eps: f64) -> Result<Vec<ComplexApprox<T>>> {
    let transform = CharacterTransform::<T>::new(group);
    theta_all_with(group, &transform, x, eps)
}

pub(crate) fn theta_all_with<T: Real>(
    group: &CharacterGroup,
    transform: &CharacterTransform<T>,
    x: f64,
    eps: f64,
) -> Result<Vec<ComplexApprox<T>>> {
    let q = group.modulus();
    ThetaRequest::new(q, x, 0, eps)?;
    let structure = group.structure();
    let c = T::lit(std::f64::consts::PI * x / q as f64);
    let levels = T::lit((group.len().max(2) as f64).log2().ceil() + 4.0);

    let mut per_parity: [Option<(Vec<Complex<T>>, T)>; 2] = [None, None];
    for eta in 0..2u32 {
        let parity = if eta == 0 { Parity::Even } else { Parity::Odd };
        if !(0..group.len()).any(|i| group.parity(i) == parity) {
            continue;
        }
        let n_max = truncation_length(q, x, eta, 0.5 * eps);
        let mut classes = vec![CompensatedSum::<T>::new(); group.len()];
        let mut magnitude = CompensatedSum::<T>::new();
        for n in 1..=n_max {
            if let Some(u) = structure.flat_index(n as u64) {
                let w = weight::<T>(n, eta, c);
                classes[u].add(w);
                magnitude.add(w);
            }
        }
        let mut data: Vec<Complex<T>> = classes
            .iter()
            .map(|s| Complex::new(s.value(), T::zero()))
            .collect();
        transform.apply(&mut data);
        let err = T::lit(tail_bound(q, x, eta, n_max))
            + T::lit(4.0) * T::epsilon() * levels * magnitude.value();
        per_parity[eta as usize] = Some((data, err));
    }
    Ok((0..group.len())
        .map(|i| {
            let (data, err) = per_parity[group.parity(i).bit() as usize]
                .as_ref()
                .expect("parity present");
            ComplexApprox::new(data[i], *err)
        })
        .collect())
}

/// How theta values are obtained for a moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Batch,
    Naive,
}

fn theta_family(parity: Parity) -> Family {
    match parity {
        Parity::Even => Family::EvenPrimitive,
        Parity::Odd => Family::OddPrimitive,
    }
}

/// `phi(q) q^{k/2} (log q)^{(k-1)^2}` (even) or `phi(q) q^{3k/2} (log q)^{(k-1)^2}` (odd).
pub fn theta_normalization(q: u64, phi: usize, k: u32, parity: Parity) -> f64 {
    let qf = q as f64;
    let power = match parity {
        Parity::Even => 0.5 * k as f64,
        Parity::Odd => 1.5 * k as f64,
    };
    let km1 = k as i32 - 1;
    phi as f64 * qf.powf(power) * qf.ln().powi(km1 * km1)
}

/// `S_{2k}^{+}(q)` (even primitive non-principal) or `S_{2k}^{-}(q)` (odd primitive).
pub fn theta_moment(group: &CharacterGroup, k: u32, parity: Parity, eps: f64, method: Method) -> Result<MomentReport> {
    let q = group.modulus();
    if q < 3 {
        return domain(format!("theta moments need q >= 3, got q = {q}"));
    }
    if k < 1 {
        return domain("theta moments need k >= 1");
    }
    let family = theta_family(parity);
    let members = family.members(group);
    let values: Vec<ComplexApprox<f64>> = match method {
        Method::Batch => {
            let all = theta_all_chars::<f64>(group, 1.0, eps)?;
            members.iter().map(|&i| all[i]).collect()
        }
        Method::Naive => members
            .par_iter()
            .map(|&i| theta_value::<f64>(group, i, 1.0, eps))
            .collect::<Result<_>>()?,
    };
    let raw = canonical_sum(values.iter().map(|v| v.norm().powi(2 * k as i32)).collect());
    let near_zero = values.iter().filter(|v| v.norm() <= v.abs_error).count();
    let normalization = theta_normalization(q, group.len(), k, parity);
    Ok(MomentReport {
        q,
        k,
        family,
        raw,
        normalization,
        ratio: raw / normalization,
        eps,
        family_size: members.len(),
        empty: members.is_empty(),
        near_zero,
    })
}

/// Result of comparing the theta series with its Mellin integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MellinCheckResult {
    pub q: u64,
    pub character: usize,
    pub series_re: f64,
    pub series_im: f64,
    pub quadrature_re: f64,
    pub quadrature_im: f64,
    pub residual: f64,
    pub height: f64,
    pub step: f64,
    /// `prefactor * int_{|u| > H} |Gamma(1/4 + 2iu)| du`; the L-factor is not included.
    pub tail_bound: f64,
}

impl MellinCheckResult {
    pub const CSV_HEADER: &'static str =
        "q,character,series_re,series_im,quadrature_re,quadrature_im,residual,height,step,tail_bound";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.6e},{},{},{:.6e}",
            self.q,
            self.character,
            self.series_re,
            self.series_im,
            self.quadrature_re,
            self.quadrature_im,
            self.residual,
            self.height,
            self.step,
            self.tail_bound
        )
    }
}

/// `(q/pi)^{1/4} / pi`.
fn mellin_prefactor(q: u64) -> f64 {
    (q as f64 / std::f64::consts::PI).powf(0.25) / std::f64::consts::PI
}

/// Integrand `L(1/2 + 4iu, chi) (q/pi)^{2iu} Gamma(1/4 + 2iu)`.
///
/// For even primitive `chi`, `theta(1, chi) = (q/pi)^{1/4} / pi * int_R integrand(u) du`:
/// Mellin inversion of `Gamma(w) (q/pi)^w L(2w, chi)` on the line `Re w = 1/4`,
/// with `w = 1/4 + 2iu`.
pub fn mellin_integrand(group: &CharacterGroup, chi: usize, u: f64, tol: f64) -> Result<Complex<f64>> {
    let q = group.modulus() as f64;
    let l = l_value(group, chi, Complex::new(0.5, 4.0 * u), tol)?;
    let g = gamma(Complex::new(0.25, 2.0 * u))?;
    let twist = Complex::new(0.0, 2.0 * u * (q / std::f64::consts::PI).ln()).exp();
    Ok(l.value * twist * g.value)
}

/// `int_{|u| > H} |Gamma(1/4 + 2iu)| du`, by trapezoid on `[H, H + 40]` (doubled).
pub fn gamma_tail(height: f64) -> Result<f64> {
    let h = 1.0 / 32.0;
    let steps = (40.0 / h) as usize;
    let mut acc = CompensatedSum::new();
    for j in 0..=steps {
        let u = height + j as f64 * h;
        let w = if j == 0 || j == steps { 0.5 * h } else { h };
        acc.add(w * gamma(Complex::new(0.25, 2.0 * u))?.value.norm());
    }
    Ok(2.0 * acc.value())
}

fn check_even_primitive(group: &CharacterGroup, chi: usize) -> Result<()> {
    if chi >= group.len() {
        return domain(format!("character index {chi} out of range"));
    }
    if group.parity(chi) != Parity::Even || !group.is_primitive(chi) || chi == 0 {
        return domain(format!(
            "Mellin check needs an even primitive character; character {chi} mod {} is {} with conductor {}",
            group.modulus(),
            group.parity(chi),
            group.conductor(chi)
        ));
    }
    Ok(())
}

/// Trapezoidal quadrature of the Mellin integral over `[-H, H]` with step `h`,
/// compared against the theta series.
pub fn mellin_check(group: &CharacterGroup, chi: usize, height: f64, step: f64, eps: f64) -> Result<MellinCheckResult> {
    check_even_primitive(group, chi)?;
    if !(height > 0.0) || !(step > 0.0) {
        return domain("height and step must be positive");
    }
    let n = (2.0 * height / step).round() as usize;
    let tol = (eps * 1e-2).max(1e-14);
    let values: Vec<Complex<f64>> = (0..=n)
        .into_par_iter()
        .map(|j| mellin_integrand(group, chi, -height + j as f64 * step, tol))
        .collect::<Result<_>>()?;
    let mut acc = ComplexSum::new();
    for (j, v) in values.iter().enumerate() {
        let w = if j == 0 || j == n { 0.5 * step } else { step };
        acc.add(v * w);
    }
    let quadrature = acc.value() * mellin_prefactor(group.modulus());
    let series = theta_value::<f64>(group, chi, 1.0, eps)?.value;
    Ok(MellinCheckResult {
        q: group.modulus(),
        character: chi,
        series_re: series.re,
        series_im: series.im,
        quadrature_re: quadrature.re,
        quadrature_im: quadrature.im,
        residual: (series - quadrature).norm(),
        height,
        step,
        tail_bound: mellin_prefactor(group.modulus()) * gamma_tail(height)?,
    })
}

/// Picks `H` so the Gamma tail is below `eps / 10`, then halves `h` from
/// `1/4` until the quadrature moves by less than `eps / 10`.
pub fn mellin_check_auto(group: &CharacterGroup, chi: usize, eps: f64) -> Result<MellinCheckResult> {
    check_even_primitive(group, chi)?;
    let prefactor = mellin_prefactor(group.modulus());
    let mut height = 1.0;
    while prefactor * gamma_tail(height)? >= 0.1 * eps && height < 64.0 {
        height += 1.0;
    }
    let mut step = 0.25;
    let mut prev = mellin_check(group, chi, height, step, eps)?;
    loop {
        step *= 0.5;
        let next = mellin_check(group, chi, height, step, eps)?;
        let moved = Complex::new(next.quadrature_re - prev.quadrature_re, next.quadrature_im - prev.quadrature_im).norm();
        if moved < 0.1 * eps || step < 1e-3 {
            return Ok(next);
        }
        prev = next;
    }
}

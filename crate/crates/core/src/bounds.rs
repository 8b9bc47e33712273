//! Closed-form bound shapes for shifted moments, large-value counts and the
//! prime cosine sum. Implicit constants are set to 1; these values are only
//! meaningful as denominators of ratios.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::lfunc::{ShiftTuple, CLOSE_THRESHOLD};
use crate::numtheory::{euler_phi, PrimeTable};
use crate::sum::CompensatedSum;

/// Smallest modulus accepted by [`f_term`] (so that `log log log q > 0`).
pub const F_MIN_Q: u64 = 17;
/// Smallest modulus accepted by [`e_term`] and [`shifted_moment_bound`].
pub const E_MIN_Q: u64 = 16;

fn loglog(q: u64) -> f64 {
    (q as f64).ln().ln()
}

/// `min{1/d, log q}`, with `d = 0` resolving to `log q`.
fn capped_inverse(d: f64, log_q: f64) -> f64 {
    if d == 0.0 {
        log_q
    } else {
        (1.0 / d).min(log_q)
    }
}

/// Pair weight `F_{i,j}`: `log min{1/|ti - tj|, log q}` for close pairs,
/// `log log log q` otherwise.
pub fn f_term(ti: f64, tj: f64, q: u64) -> Result<f64> {
    if q < F_MIN_Q {
        return domain(format!("F needs q >= {F_MIN_Q}, got q = {q}"));
    }
    let d = (ti - tj).abs();
    Ok(if d <= CLOSE_THRESHOLD {
        capped_inverse(d, (q as f64).ln()).ln()
    } else {
        loglog(q).ln()
    })
}

/// Pair factor `E_{i,j}`: `min{1/|ti - tj|, log q}^{1/2}` for close pairs,
/// `(log log q)^{1/2}` otherwise.
pub fn e_term(ti: f64, tj: f64, q: u64) -> Result<f64> {
    if q < E_MIN_Q {
        return domain(format!("E needs q >= {E_MIN_Q}, got q = {q}"));
    }
    let d = (ti - tj).abs();
    Ok(if d <= CLOSE_THRESHOLD {
        capped_inverse(d, (q as f64).ln()).sqrt()
    } else {
        loglog(q).sqrt()
    })
}

/// One entry of the pair table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    pub separation: f64,
    pub close: bool,
    pub f: f64,
    pub e: f64,
}

/// All bound ingredients for one `(q, t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundProfile {
    pub q: u64,
    pub shifts: ShiftTuple,
    pub k: usize,
    pub w: f64,
    pub pairs: Vec<PairTerm>,
    pub eps: f64,
    pub shifted_moment_bound: f64,
}

impl BoundProfile {
    pub fn new(q: u64, t: &ShiftTuple, eps: f64) -> Result<Self> {
        let s = t.shifts();
        let pairs = t
            .pairs()
            .into_iter()
            .map(|(i, j, d, close)| {
                Ok(PairTerm {
                    i,
                    j,
                    separation: d,
                    close,
                    f: f_term(s[i], s[j], q)?,
                    e: e_term(s[i], s[j], q)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let k = t.k();
        let w = 2.0 * k as f64 * loglog(q) + 2.0 * pairs.iter().map(|p| p.f).sum::<f64>();
        Ok(Self {
            q,
            shifts: t.clone(),
            k,
            w,
            pairs,
            eps,
            shifted_moment_bound: shifted_moment_bound(q, t, eps)?,
        })
    }
}

/// `W = 2k log log q + 2 sum_{i<j} F_{i,j}`.
pub fn w_quantity(t: &ShiftTuple, q: u64) -> Result<f64> {
    let s = t.shifts();
    let mut acc = 2.0 * t.k() as f64 * loglog(q);
    for (i, j, _, _) in t.pairs() {
        acc += 2.0 * f_term(s[i], s[j], q)?;
    }
    Ok(acc)
}

/// Second knot `W log W / (4k)`.
pub fn second_knot(w: f64, k: usize) -> f64 {
    w * w.ln() / (4.0 * k as f64)
}

fn check_wk(w: f64, k: usize) -> Result<()> {
    if !(w > std::f64::consts::E) {
        return domain(format!("W must exceed e, got {w}"));
    }
    if k == 0 {
        return domain("k must be at least 1");
    }
    Ok(())
}

/// `A = log W / 2` for `V <= W`, `W log W / (2V)` up to the second knot, `2k` beyond.
pub fn a_quantity(v: f64, w: f64, k: usize) -> Result<f64> {
    check_wk(w, k)?;
    if !(v > 0.0) {
        return domain(format!("V must be positive, got {v}"));
    }
    Ok(if v <= w {
        0.5 * w.ln()
    } else if v <= second_knot(w, k) {
        w * w.ln() / (2.0 * v)
    } else {
        2.0 * k as f64
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    I,
    II,
    III,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeBound {
    pub v: f64,
    pub regime: Regime,
    pub value: f64,
}

/// Which regime `V` falls in; `V` at the second knot counts as regime II.
pub fn regime_of(v: f64, w: f64, k: usize) -> Regime {
    if v <= w {
        Regime::I
    } else if v <= second_knot(w, k) {
        Regime::II
    } else {
        Regime::III
    }
}

/// Regime I expression `phi(q) (V/sqrt W) exp(-(V^2/W)(1 - 18k/(5 log W))^2)`.
pub fn regime_one(phi: f64, v: f64, w: f64, k: usize) -> f64 {
    let c = 1.0 - 18.0 * k as f64 / (5.0 * w.ln());
    phi * v / w.sqrt() * (-(v * v / w) * c * c).exp()
}

/// Regime II expression `phi(q) (V/sqrt W) exp(-(V^2/W)(1 - 18kV/(5 W log W))^2)`.
pub fn regime_two(phi: f64, v: f64, w: f64, k: usize) -> f64 {
    let c = 1.0 - 18.0 * k as f64 * v / (5.0 * w * w.ln());
    phi * v / w.sqrt() * (-(v * v / w) * c * c).exp()
}

/// Regime III expression `phi(q) exp(-(V/(801k)) log V)`.
pub fn regime_three(phi: f64, v: f64, k: usize) -> f64 {
    phi * (-(v / (801.0 * k as f64)) * v.ln()).exp()
}

/// Three-regime bound for `N_t(q, V)` with unit constant.
pub fn large_value_bound(q: u64, v: f64, w: f64, k: usize) -> Result<RegimeBound> {
    check_wk(w, k)?;
    let floor = 4.0 * loglog(q).max(0.0).sqrt();
    if q < 3 || !(v >= floor) {
        return domain(format!("V must be at least 4 sqrt(log log q) = {floor}, got {v}"));
    }
    let phi = euler_phi(q)? as f64;
    let regime = regime_of(v, w, k);
    let value = match regime {
        Regime::I => regime_one(phi, v, w, k),
        Regime::II => regime_two(phi, v, w, k),
        Regime::III => regime_three(phi, v, k),
    };
    Ok(RegimeBound { v, regime, value })
}

/// `phi(q) (log q)^{k/2 + eps} prod_{i<j} E_{i,j}`.
pub fn shifted_moment_bound(q: u64, t: &ShiftTuple, eps: f64) -> Result<f64> {
    if q < E_MIN_Q {
        return domain(format!("the shifted-moment bound needs q >= {E_MIN_Q}, got q = {q}"));
    }
    let s = t.shifts();
    let mut factors = Vec::new();
    for (i, j, _, _) in t.pairs() {
        factors.push(e_term(s[i], s[j], q)?);
    }
    let log_q = (q as f64).ln();
    let head = euler_phi(q)? as f64 * log_q.powf(0.5 * t.k() as f64 + eps);
    Ok(factors.into_iter().fold(head, |acc, e| acc * e))
}

/// `exp(c (log q + log+ t) / log log q)`.
pub fn max_size_shape(q: u64, t: f64, c: f64) -> Result<f64> {
    if q < E_MIN_Q {
        return domain(format!("the max-size shape needs q >= {E_MIN_Q}, got q = {q}"));
    }
    let log_plus = if t > 1.0 { t.ln() } else { 0.0 };
    Ok((c * ((q as f64).ln() + log_plus) / loglog(q)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CosSumCheck {
    pub z: u64,
    pub a: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl CosSumCheck {
    pub const CSV_HEADER: &'static str = "a,lhs,rhs,margin";

    pub fn csv_row(&self) -> String {
        format!("{},{:.15e},{:.15e},{:.15e}", self.a, self.lhs, self.rhs, self.margin)
    }
}

/// `sum_{p <= z} cos(a log p)/p` against its main term
/// `log min{1/|a|, log z}` (for `|a| <= 1/100`) or `log log (2 + |a|)`.
pub fn cos_sum_check(z: u64, a: f64, primes: &PrimeTable) -> Result<CosSumCheck> {
    if z < 3 {
        return domain(format!("z must be at least 3, got {z}"));
    }
    if (primes.limit() as u64) < z {
        return domain(format!("prime table reaches {}, need {z}", primes.limit()));
    }
    let mut acc = CompensatedSum::new();
    for &p in primes.primes_up_to(z) {
        let pf = p as f64;
        acc.add((a * pf.ln()).cos() / pf);
    }
    let lhs = acc.value();
    let rhs = if a.abs() <= CLOSE_THRESHOLD {
        capped_inverse(a.abs(), (z as f64).ln()).ln()
    } else {
        (2.0 + a.abs()).ln().ln()
    };
    Ok(CosSumCheck { z, a, lhs, rhs, margin: lhs - rhs })
}

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::time::{Duration, Instant};

use chartheta::bounds::{
    a_quantity, cos_sum_check, regime_one, regime_two, second_knot, w_quantity,
};
use chartheta::characters::{build_group, Parity};
use chartheta::lfunc::{
    l_value, l_values_all_chars, large_value_counts, majorant_scan, shifted_moment, MajorantParams,
    ShiftTuple,
};
use chartheta::numtheory::{is_prime, sieve};
use chartheta::randmodel::{model_moment, SteinhausSample};
use chartheta::specfun::{gamma, hurwitz_zeta};
use chartheta::theta::{mellin_check, theta_all_chars, theta_moment, theta_value, Method};
use chartheta::Family;
use num_complex::Complex;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_s: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() <= limit_s, || {
        format!("took {:.1}s, limit {limit_s}s", elapsed.as_secs_f64())
    })
}

fn orthogonality() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for q in 1..=200u64 {
        let g = build_group(q).map_err(|e| e.to_string())?;
        let roots = g.root_table::<f64>();
        let n = g.len();
        // table[chi][u] = chi(unit u)
        let table: Vec<Vec<Complex<f64>>> = (0..n)
            .map(|c| (0..n).map(|u| roots[g.phase_at_unit(c, u) as usize]).collect())
            .collect();
        for m in 0..n {
            for k in 0..n {
                let s: Complex<f64> = (0..n).map(|c| table[c][m] * table[c][k].conj()).sum();
                let expect = if m == k { n as f64 } else { 0.0 };
                worst = worst.max((s - expect).norm());
            }
        }
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:.3e}"))?;
    within(start.elapsed(), 60.0)?;
    Ok(format!("max deviation {worst:.2e} in {:.1}s", start.elapsed().as_secs_f64()))
}

fn batch_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst_theta = 0.0f64;
    let mut worst_l = 0.0f64;
    for q in [7u64, 97, 101, 997] {
        let g = build_group(q).map_err(|e| e.to_string())?;
        let batch = theta_all_chars::<f64>(&g, 1.0, 1e-13).map_err(|e| e.to_string())?;
        for chi in 0..g.len() {
            let naive = theta_value::<f64>(&g, chi, 1.0, 1e-13).map_err(|e| e.to_string())?;
            worst_theta = worst_theta.max((batch[chi].value - naive.value).norm());
        }
        for s in [Complex::new(0.5, 0.0), Complex::new(0.5, 3.0)] {
            let batch = l_values_all_chars(&g, s, 1e-13).map_err(|e| e.to_string())?;
            for chi in 0..g.len() {
                let naive = l_value(&g, chi, s, 1e-13).map_err(|e| e.to_string())?;
                worst_l = worst_l.max((batch[chi].value - naive.value).norm());
            }
        }
    }
    ensure(worst_theta < 1e-10 && worst_l < 1e-10, || {
        format!("theta {worst_theta:.3e}, L {worst_l:.3e}")
    })?;
    within(start.elapsed(), 120.0)?;
    Ok(format!(
        "theta {worst_theta:.2e}, L {worst_l:.2e} in {:.1}s",
        start.elapsed().as_secs_f64()
    ))
}

fn performance() -> Outcome {
    let q = 100_003u64;
    let start = Instant::now();
    let g = build_group(q).map_err(|e| e.to_string())?;
    let all = theta_all_chars::<f64>(&g, 1.0, 1e-12).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut worst = 0.0f64;
    let step = g.len() / 20;
    for j in 0..20 {
        let chi = j * step + j;
        let naive = theta_value::<f64>(&g, chi, 1.0, 1e-12).map_err(|e| e.to_string())?;
        worst = worst.max((all[chi].value - naive.value).norm());
    }
    ensure(worst < 1e-8, || format!("spot deviation {worst:.3e}"))?;
    within(elapsed, 10.0)?;
    Ok(format!("{:.2}s for q = {q}, spot deviation {worst:.2e}", elapsed.as_secs_f64()))
}

fn conjugate_symmetry() -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for q in 3..=499u64 {
        let g = build_group(q).map_err(|e| e.to_string())?;
        let all = theta_all_chars::<f64>(&g, 1.0, 1e-14).map_err(|e| e.to_string())?;
        for chi in (0..g.len()).filter(|&c| g.is_primitive(c)) {
            let d = (all[chi].norm() - all[g.conjugate(chi)].norm()).abs();
            worst = worst.max(d);
            checked += 1;
        }
    }
    ensure(worst < 1e-10, || format!("max gap {worst:.3e}"))?;
    Ok(format!("{checked} primitive characters, max gap {worst:.2e}"))
}

fn mellin_identity() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    for q in [5u64, 13, 29] {
        let g = build_group(q).map_err(|e| e.to_string())?;
        for chi in (1..g.len()).filter(|&c| g.parity(c) == Parity::Even && g.is_primitive(c)) {
            let r = mellin_check(&g, chi, 8.0, 1.0 / 64.0, 1e-13).map_err(|e| e.to_string())?;
            worst = worst.max(r.residual);
            count += 1;
        }
    }
    ensure(worst < 1e-6, || format!("max residual {worst:.3e}"))?;
    within(start.elapsed(), 60.0)?;
    Ok(format!("{count} characters, max residual {worst:.2e}"))
}

fn special_functions() -> Outcome {
    use std::f64::consts::PI;
    let g4 = build_group(4).map_err(|e| e.to_string())?;
    let odd = (0..g4.len()).find(|&c| g4.parity(c) == Parity::Odd).unwrap();
    let l = l_value(&g4, odd, Complex::new(1.0, 0.0), 1e-13).map_err(|e| e.to_string())?;
    let e1 = (l.value - PI / 4.0).norm();
    let z = hurwitz_zeta(Complex::new(2.0, 0.0), 0.5, 1e-13).map_err(|e| e.to_string())?;
    let e2 = (z.value - PI * PI / 2.0).norm();
    let gm = gamma(Complex::new(0.5, 1.0)).map_err(|e| e.to_string())?;
    let e3 = (gm.value.norm_sqr() - PI / PI.cosh()).abs();
    ensure(e1 < 1e-10, || format!("L(1) error {e1:.3e}"))?;
    ensure(e2 < 1e-12, || format!("zeta(2,1/2) error {e2:.3e}"))?;
    ensure(e3 < 1e-11, || format!("|Gamma|^2 error {e3:.3e}"))?;

    // structural identities
    let s = SteinhausSample::new(64, 3).map_err(|e| e.to_string())?;
    let f = |n| s.value(n).unwrap();
    ensure((f(4) - f(2) * f(2)).norm() < 1e-15, || "f(4) != f(2)^2".into())?;
    let q = 1009;
    let t0 = ShiftTuple::central(1).map_err(|e| e.to_string())?;
    let w = w_quantity(&t0, q).map_err(|e| e.to_string())?;
    let ll = (q as f64).ln().ln();
    ensure((w - 4.0 * ll).abs() < 1e-13, || format!("W(0,0) = {w}"))?;
    let g5 = build_group(5).map_err(|e| e.to_string())?;
    let m0 = chartheta::lfunc::central_moment(&g5, 0, 1e-12).map_err(|e| e.to_string())?;
    ensure(m0.raw == 3.0, || format!("k = 0 moment {}", m0.raw))?;
    Ok(format!("L(1) {e1:.1e}, zeta {e2:.1e}, Gamma {e3:.1e}"))
}

fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

fn decile_drift(ratios: &[f64]) -> f64 {
    let d = (ratios.len() / 10).max(1);
    let first: f64 = ratios[..d].iter().sum::<f64>() / d as f64;
    let last: f64 = ratios[ratios.len() - d..].iter().sum::<f64>() / d as f64;
    (first / last).max(last / first)
}

fn coefficient_of_variation(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    var.sqrt() / mean
}

fn moment_trend() -> Outcome {
    let start = Instant::now();
    let all = primes_in(1009, 10007);
    // 40 primes spread evenly through the range, endpoints included
    let picks: Vec<u64> = (0..40).map(|i| all[i * (all.len() - 1) / 39]).collect();
    let mut summary = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let ratios: Vec<f64> = picks
            .iter()
            .map(|&q| {
                let g = build_group(q).map_err(|e| e.to_string())?;
                Ok(theta_moment(&g, 1, parity, 1e-12, Method::Batch).map_err(|e| e.to_string())?.ratio)
            })
            .collect::<Result<_, String>>()?;
        let cv = coefficient_of_variation(&ratios);
        let drift = decile_drift(&ratios);
        ensure(cv < 0.5 && drift < 2.0, || format!("{parity}: cv {cv:.3}, drift {drift:.3}"))?;
        summary.push(format!("{parity}: cv {cv:.3}, drift {drift:.3}"));
    }
    within(start.elapsed(), 1800.0)?;
    Ok(format!("{} primes; {}", picks.len(), summary.join("; ")))
}

fn shift_decorrelation() -> Outcome {
    let q = 1009u64;
    let g = build_group(q).map_err(|e| e.to_string())?;
    let deltas = [0.0, 1.0 / (q as f64).ln(), 0.1, 0.5, 1.0, 5.0];
    let values: Vec<f64> = deltas
        .iter()
        .map(|&d| {
            let t = ShiftTuple::new(vec![-0.5 * d, 0.5 * d]).map_err(|e| e.to_string())?;
            Ok(shifted_moment(&g, &t, 1e-10, Family::Star, 0.1).map_err(|e| e.to_string())?.raw)
        })
        .collect::<Result<_, String>>()?;
    for w in values.windows(2) {
        ensure(w[1] <= w[0] * 1.02, || format!("increase {:.6e} -> {:.6e}", w[0], w[1]))?;
    }
    let ratio = values[0] / values[4];
    ensure(ratio > 1.2, || format!("ratio {ratio:.4}"))?;
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.1}")).collect();
    Ok(format!("values [{}], ratio {ratio:.3}", shown.join(", ")))
}

fn large_values() -> Outcome {
    let mut notes = Vec::new();
    for (q, shifts) in [(101u64, vec![0.0, 0.0]), (499, vec![0.0, 1.0]), (1009, vec![-0.5, 0.0, 0.5, 2.0])] {
        let g = build_group(q).map_err(|e| e.to_string())?;
        let t = ShiftTuple::new(shifts).map_err(|e| e.to_string())?;
        let floor = chartheta::lfunc::LOG_FLOOR * t.shifts().len() as f64;
        let mut grid = vec![floor - 1.0];
        grid.extend((0..=80).map(|i| -10.0 + 0.25 * i as f64));
        grid.push(1e6);
        let h = large_value_counts(&g, &t, &grid, 1e-10, Family::Nonquadratic).map_err(|e| e.to_string())?;
        ensure(h.counts.windows(2).all(|w| w[1] <= w[0]), || format!("q={q}: counts increase"))?;
        ensure(h.counts[0] == h.family_size, || format!("q={q}: low endpoint {}", h.counts[0]))?;
        ensure(*h.counts.last().unwrap() == 0, || format!("q={q}: high endpoint nonzero"))?;
        notes.push(format!("q={q} size {}", h.family_size));
    }
    Ok(notes.join(", "))
}

fn cosine_sum() -> Outcome {
    let primes = sieve(1_000_000).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for a in [0.0, 0.01, 0.1, 1.0, 2.0, 10.0] {
        let c = cos_sum_check(1_000_000, a, &primes).map_err(|e| e.to_string())?;
        worst = worst.max(c.margin.abs());
    }
    ensure(worst <= 5.0, || format!("max |margin| {worst:.3}"))?;
    let zs = [100_000u64, 200_000, 400_000, 700_000, 1_000_000];
    let margins: Vec<f64> = zs
        .iter()
        .map(|&z| Ok(cos_sum_check(z, 0.0, &primes).map_err(|e| e.to_string())?.margin))
        .collect::<Result<_, String>>()?;
    let drift = margins.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    ensure(drift < 0.02, || format!("a = 0 drift {drift:.4}"))?;
    Ok(format!("max |margin| {worst:.3}, a = 0 drift {drift:.2e}"))
}

fn majorant() -> Outcome {
    let primes = sieve(1000).map_err(|e| e.to_string())?;
    let mut tightest = f64::INFINITY;
    let mut count = 0;
    for q in [101u64, 211, 499] {
        let g = build_group(q).map_err(|e| e.to_string())?;
        let x = (q as f64).ln().powi(2);
        let params = MajorantParams { t: 0.0, x, lambda: 0.6, primes_only: false, height: None };
        let rows = majorant_scan(&g, &primes, Family::Nonquadratic, &params, 10.0, 1e-12).map_err(|e| e.to_string())?;
        for r in &rows {
            ensure(r.margin >= 0.0, || format!("q={q} chi={}: margin {}", r.chi, r.margin))?;
            tightest = tightest.min(r.margin);
        }
        count += rows.len();
    }
    Ok(format!("{count} characters, smallest margin {tightest:.3}"))
}

fn random_model() -> Outcome {
    let run = |workers: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .unwrap()
            .install(|| model_moment(101, 1, 10_000, 2024, 1e-12, 0))
            .map_err(|e| e.to_string())
    };
    let est = run(4)?;
    let z = (est.estimate - est.weight_square_sum).abs() / est.std_error;
    ensure(z <= 3.0, || format!("{z:.2} standard errors off"))?;
    ensure(run(1)? == est && run(3)? == est, || "worker count changed the result".into())?;
    Ok(format!(
        "estimate {:.6} vs exact {:.6} ({z:.2} SE), replay identical",
        est.estimate, est.weight_square_sum
    ))
}

fn boundary_continuity() -> Outcome {
    let mut worst = 0.0f64;
    for q in [17u64, 101, 1009, 100_003] {
        let phi = chartheta::numtheory::euler_phi(q).map_err(|e| e.to_string())? as f64;
        for shifts in [vec![0.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0, 0.0, 0.0], vec![0.0, 0.005, 1.0, 3.0]] {
            let t = ShiftTuple::new(shifts).map_err(|e| e.to_string())?;
            let k = t.k();
            let w = w_quantity(&t, q).map_err(|e| e.to_string())?;
            if w <= std::f64::consts::E {
                continue;
            }
            let (r1, r2) = (regime_one(phi, w, w, k), regime_two(phi, w, w, k));
            worst = worst.max((r1 - r2).abs() / r1);
            let a_lo = a_quantity(w, w, k).map_err(|e| e.to_string())?;
            let a_lo_right = w * w.ln() / (2.0 * w);
            worst = worst.max((a_lo - a_lo_right).abs() / a_lo);
            let knot = second_knot(w, k);
            if knot > w {
                let a_hi = a_quantity(knot, w, k).map_err(|e| e.to_string())?;
                worst = worst.max((a_hi - 2.0 * k as f64).abs() / a_hi);
            }
        }
    }
    ensure(worst < 1e-12, || format!("max relative gap {worst:.3e}"))?;
    Ok(format!("max relative gap {worst:.2e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("orthogonality", orthogonality),
        ("batch-transform equivalence", batch_equivalence),
        ("performance at q = 100003", performance),
        ("conjugate symmetry of |theta|", conjugate_symmetry),
        ("Mellin identity", mellin_identity),
        ("special-function goldens", special_functions),
        ("second-moment trend", moment_trend),
        ("shift decorrelation", shift_decorrelation),
        ("large-value histogram", large_values),
        ("prime cosine sum", cosine_sum),
        ("GRH majorant", majorant),
        ("random-model second moment", random_model),
        ("bound continuity", boundary_continuity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

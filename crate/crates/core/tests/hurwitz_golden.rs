//! Hurwitz zeta against 40-digit reference values at 50 random points.

use chartheta::specfun::hurwitz_zeta;
use chartheta::Error;
use num_complex::Complex;

fn golden() -> Vec<(Complex<f64>, f64, Complex<f64>)> {
    include_str!("data/hurwitz_golden.txt")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            (Complex::new(v[0], v[1]), v[2], Complex::new(v[3], v[4]))
        })
        .collect()
}

#[test]
fn reported_error_is_honest() {
    let points = golden();
    assert_eq!(points.len(), 50);
    for (s, a, expect) in points {
        for tol in [1e-6, 1e-10, 1e-12] {
            let tol = tol * expect.norm().max(1.0);
            // an unreachable tolerance still reports the value and its bound
            let (value, bound) = match hurwitz_zeta(s, a, tol) {
                Ok(z) => {
                    assert!(z.abs_error <= tol);
                    (z.value, z.abs_error)
                }
                Err(Error::Precision { achieved, re, im, .. }) => {
                    assert!(tol < 1e-9, "s={s} a={a}: loose tolerance {tol:e} refused");
                    (Complex::new(re, im), achieved)
                }
                Err(e) => panic!("{e}"),
            };
            let err = (value - expect).norm();
            // the reference itself is rounded to double precision
            let slack = 2.0 * f64::EPSILON * expect.norm();
            assert!(err <= bound + slack, "s={s} a={a}: error {err:e} > bound {bound:e}");
        }
    }
}

#[test]
fn single_precision_is_honest_too() {
    for (s, a, expect) in golden().into_iter().take(20) {
        let s32 = Complex::new(s.re as f32, s.im as f32);
        let z = hurwitz_zeta(s32, a as f32, 1e-3 * expect.norm().max(1.0) as f32).unwrap();
        // the f32 input is itself rounded; allow for the induced change
        let err = Complex::new(z.value.re as f64 - expect.re, z.value.im as f64 - expect.im).norm();
        assert!(err <= z.abs_error as f64 + 1e-4 * expect.norm().max(1.0), "s={s} a={a}: {err:e}");
    }
}

//! Generalized exponential integrals `E_n(x) = ∫₁^∞ e^{-xt} t^{-n} dt`.

use crate::error::{Error, Result};
use crate::specfun::quad::{integrate, QuadratureSpec};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 1000;
const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;
/// Upward recursion is abandoned once `1 − x·s_i` keeps less than this fraction of `1`.
const CANCELLATION_LIMIT: f64 = 1e-3;

/// `E_n(x)`. `E_n(0) = 1/(n−1)` for `n ≥ 2`.
pub fn exp_integral_en(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("exp_integral_en", "order n must be >= 1"));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("exp_integral_en", format!("x must be >= 0, got {x}")));
    }
    if x == 0.0 {
        if n == 1 {
            return Err(Error::domain("exp_integral_en", "E_1 diverges at x = 0"));
        }
        return Ok(1.0 / (n as f64 - 1.0));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    Ok((-x).exp() * scaled(n, x)?)
}

/// `e^x · E_n(x)`, finite for arbitrarily large `x`.
pub fn exp_integral_en_scaled(n: u32, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("exp_integral_en_scaled", "order n must be >= 1"));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "exp_integral_en_scaled",
            format!("x must be positive and finite, got {x}"),
        ));
    }
    scaled(n, x)
}

/// `[e^x E_1(x), …, e^x E_nmax(x)]`, sharing work across orders where stable.
pub fn exp_integral_en_scaled_seq(nmax: u32, x: f64) -> Result<Vec<f64>> {
    if nmax == 0 {
        return Ok(Vec::new());
    }
    exp_integral_en_scaled(1, x)?;
    if x >= 1.0 {
        return (1..=nmax).map(|n| continued_fraction(n, x)).collect();
    }
    let mut out = Vec::with_capacity(nmax as usize);
    let mut s = e1_series(x) * x.exp();
    out.push(s);
    let mut recursion_ok = true;
    for i in 1..nmax {
        let next = if recursion_ok {
            let diff = 1.0 - x * s;
            if diff < CANCELLATION_LIMIT {
                recursion_ok = false;
                by_quadrature(i + 1, x)?
            } else {
                diff / i as f64
            }
        } else {
            by_quadrature(i + 1, x)?
        };
        s = next;
        out.push(s);
    }
    Ok(out)
}

fn scaled(n: u32, x: f64) -> Result<f64> {
    if x >= 1.0 {
        return continued_fraction(n, x);
    }
    if n == 1 {
        return Ok(e1_series(x) * x.exp());
    }
    Ok(*exp_integral_en_scaled_seq(n, x)?.last().expect("nonempty"))
}

/// `E_1(x) = −γ − ln x − Σ_{k≥1} (−x)^k / (k·k!)` for `0 < x < 1`.
fn e1_series(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for k in 1..MAX_ITER {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < f64::EPSILON * sum.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Modified Lentz evaluation of the continued fraction for `e^x E_n(x)`, `x ≥ 1`.
fn continued_fraction(n: u32, x: f64) -> Result<f64> {
    let nm1 = n as f64 - 1.0;
    let mut b = x + n as f64;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (nm1 + i as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::IterationLimit {
        func: "exp_integral_en",
        iterations: MAX_ITER,
    })
}

/// `∫₁^∞ e^{−x(t−1)} t^{−n} dt` by adaptive quadrature.
fn by_quadrature(n: u32, x: f64) -> Result<f64> {
    let spec = QuadratureSpec::default().with_rel_tol(1e-13);
    let spec = QuadratureSpec { abs_tol: 0.0, ..spec };
    integrate(|t| (-x * (t - 1.0) - n as f64 * t.ln()).exp(), 1.0, f64::INFINITY, &spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oracle(n: u32, x: f64) -> f64 {
        let spec = QuadratureSpec::new(1e-12, 0.0, 4000).unwrap();
        integrate(|t| (-x * t).exp() / t.powi(n as i32), 1.0, f64::INFINITY, &spec).unwrap()
    }

    #[test]
    fn zero_argument() {
        assert_eq!(exp_integral_en(2, 0.0).unwrap(), 1.0);
        assert_eq!(exp_integral_en(5, 0.0).unwrap(), 0.25);
        assert!(exp_integral_en(1, 0.0).is_err());
        assert!(exp_integral_en(2, -1.0).is_err());
        assert!(exp_integral_en(0, 1.0).is_err());
    }

    #[test]
    fn e1_at_one() {
        let v = exp_integral_en(1, 1.0).unwrap();
        assert!((v - oracle(1, 1.0)).abs() < 1e-12);
        assert!((v - 0.219_383_934_4).abs() < 1e-10);
        let s = exp_integral_en_scaled(1, 1.0).unwrap();
        assert!((s - 0.596_347_362_4).abs() < 1e-9);
    }

    #[test]
    fn recursion_self_consistency() {
        let e2 = exp_integral_en(2, 0.5).unwrap();
        let e3 = exp_integral_en(3, 0.5).unwrap();
        assert!((e3 - ((-0.5f64).exp() - 0.5 * e2) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn agrees_with_quadrature_across_branches() {
        for &n in &[1, 2, 3, 7, 16, 40] {
            for &x in &[1e-4, 0.05, 0.5, 0.999, 1.0, 2.5, 20.0, 150.0] {
                let got = exp_integral_en(n, x).unwrap();
                let want = oracle(n, x);
                assert!(((got - want) / want).abs() < 1e-10, "n={n} x={x}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn scaled_large_argument() {
        let v = exp_integral_en_scaled(2, 1e4).unwrap();
        assert!(v > 0.9e-4 && v < 1.0e-4);
        let v = exp_integral_en_scaled(1, 700.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
        let v = exp_integral_en_scaled(3, 1e6).unwrap();
        assert!((v * 1e6 - 1.0).abs() < 1e-5);
        assert!(exp_integral_en_scaled(1, 0.0).is_err());
    }

    #[test]
    fn scaled_matches_unscaled() {
        for &n in &[1, 4, 16] {
            for &x in &[1e-3, 0.3, 3.0, 60.0, 600.0] {
                let a = exp_integral_en_scaled(n, x).unwrap();
                let b = x.exp() * exp_integral_en(n, x).unwrap();
                assert!(((a - b) / a).abs() < 1e-12, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn sequence_matches_single_orders() {
        for &x in &[1e-6, 0.2, 0.9, 4.0] {
            let seq = exp_integral_en_scaled_seq(20, x).unwrap();
            for (i, v) in seq.iter().enumerate() {
                let single = exp_integral_en_scaled(i as u32 + 1, x).unwrap();
                assert!(((v - single) / single).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn quadrature_fallback_agrees_with_recursion() {
        for &(n, x) in &[(2, 0.3), (9, 0.7), (30, 0.01)] {
            let rec = exp_integral_en_scaled(n, x).unwrap();
            let q = by_quadrature(n, x).unwrap();
            assert!(((rec - q) / q).abs() < 1e-11, "n={n} x={x}");
        }
    }
}

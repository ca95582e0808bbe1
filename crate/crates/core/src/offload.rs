//! Frame offloading delays: uplink transmission, deterministic inference and
//! the M/D/1 waiting time at the edge server.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{ln_gamma, try_integrate, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrafficModel {
    /// Frame generation intensity, frames·s⁻¹·km⁻².
    pub lambda_rate: f64,
    /// Encoding rate, bits per pixel.
    pub theta_bits: f64,
    /// Compression ratio.
    pub xi_compress: f64,
    /// Frame side length in pixels (frames are s × s).
    pub s_resolution: f64,
}

impl Default for TrafficModel {
    fn default() -> Self {
        Self {
            lambda_rate: 100.0,
            theta_bits: 24.0,
            xi_compress: 2.0,
            s_resolution: 424.42,
        }
    }
}

impl TrafficModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("lambda_rate", self.lambda_rate),
            ("theta_bits", self.theta_bits),
            ("s_resolution", self.s_resolution),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("traffic.{name} must be positive, got {v}")));
            }
        }
        if !(self.xi_compress >= 1.0 && self.xi_compress.is_finite()) {
            return Err(Error::Config(format!(
                "traffic.xi_compress must be >= 1, got {}",
                self.xi_compress
            )));
        }
        Ok(())
    }

    /// Bits per frame at resolution `s`: `θs²/ξ`.
    pub fn payload_bits_at(&self, s: f64) -> f64 {
        self.theta_bits * s * s / self.xi_compress
    }

    pub fn payload_bits(&self) -> f64 {
        self.payload_bits_at(self.s_resolution)
    }
}

/// Inference cost and accuracy fit. `c1`, `c2` are TFLOP counts and `h_capacity` is in TFLOPS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InferenceModel {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub h_capacity: f64,
}

impl Default for InferenceModel {
    fn default() -> Self {
        Self {
            c1: 7e-10,
            c2: 0.083,
            c3: 1.0,
            c4: 1.578,
            c5: 6.5e-3,
            h_capacity: 1.0,
        }
    }
}

impl InferenceModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c1", self.c1),
            ("c2", self.c2),
            ("c4", self.c4),
            ("c5", self.c5),
            ("h_capacity", self.h_capacity),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("inference.{name} must be positive, got {v}")));
            }
        }
        if !(self.c3 > 0.0 && self.c3 <= 1.0) {
            return Err(Error::Config(format!("inference.c3 must lie in (0, 1], got {}", self.c3)));
        }
        Ok(())
    }

    /// Work per frame in TFLOP: `c1 s³ + c2`.
    pub fn work(&self, s: f64) -> f64 {
        self.c1 * s * s * s + self.c2
    }
}

/// Seconds to push one frame through a link of `rate` bit/s.
pub fn uplink_time(traffic: &TrafficModel, rate: f64) -> Result<f64> {
    if !(rate > 0.0) {
        return Err(Error::domain("uplink_time", format!("rate must be positive, got {rate}")));
    }
    Ok(traffic.payload_bits() / rate)
}

/// Inference time `(c1 s³ + c2)/H` in seconds.
pub fn service_time(inf: &InferenceModel, s: f64) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(Error::domain("service_time", format!("s must be >= 0, got {s}")));
    }
    Ok(inf.work(s) / inf.h_capacity)
}

/// Detection accuracy `c3 − c4 e^{−c5 s}`. Negative at small `s`; the fit is reported as-is.
pub fn accuracy(inf: &InferenceModel, s: f64) -> f64 {
    inf.c3 - inf.c4 * (-inf.c5 * s).exp()
}

/// Smallest resolution reaching accuracy `a_min`.
pub fn min_resolution(inf: &InferenceModel, a_min: f64) -> Result<f64> {
    if !(a_min < inf.c3) {
        return Err(Error::domain(
            "min_resolution",
            format!("accuracy {a_min} is not reachable below the asymptote {}", inf.c3),
        ));
    }
    Ok((inf.c4 / (inf.c3 - a_min)).ln() / inf.c5)
}

fn check_queue(func: &'static str, rho: f64, t_s: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::domain(func, format!("load must lie in [0, 1), got {rho}")));
    }
    if !(t_s > 0.0 && t_s.is_finite()) {
        return Err(Error::domain(func, format!("service time must be positive, got {t_s}")));
    }
    Ok(())
}

/// `P(T_w > T)` for an M/D/1 queue with load `rho` and service time `t_s`.
pub fn mdone_wait_ccdf(rho: f64, t_s: f64, t: f64) -> Result<f64> {
    check_queue("mdone_wait_ccdf", rho, t_s)?;
    if !(t >= 0.0) {
        return Err(Error::domain("mdone_wait_ccdf", format!("T must be >= 0, got {t}")));
    }
    if rho == 0.0 {
        return Ok(0.0);
    }
    Ok(ccdf_normalized(rho, t / t_s))
}

/// Largest magnitude the forward sum may reach, relative to `1/(1−ρ)`, before
/// cancellation makes it less accurate than the tail series.
const FORWARD_ERROR_BUDGET: f64 = 1e-13;

fn ccdf_normalized(rho: f64, tau: f64) -> f64 {
    if tau == f64::INFINITY {
        return 0.0;
    }
    if tau < 1.0 {
        return (-(1.0 - rho) * (rho * tau).exp() + 1.0).clamp(0.0, 1.0);
    }
    if decay_rate(rho) * tau > 800.0 {
        return 0.0;
    }
    if let Some(p) = forward_sum(rho, tau) {
        return p.clamp(0.0, 1.0);
    }
    tail_sum(rho, tau).clamp(0.0, 1.0)
}

/// The printed Erlang series `1 − (1−ρ) Σ_{ν ≤ τ} [ρ(ν−τ)]^ν/ν! e^{−ρ(ν−τ)}` with
/// sign tracking in log-magnitude space and compensated summation.
/// Returns `None` when cancellation would exceed the error budget.
fn forward_sum(rho: f64, tau: f64) -> Option<f64> {
    let n = tau.floor() as u64;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut magnitude = 0.0f64;
    for nu in 0..=n {
        let d = tau - nu as f64;
        let term = if nu == 0 {
            (rho * tau).exp()
        } else if d == 0.0 {
            0.0
        } else {
            let nu_f = nu as f64;
            let ln_mag = nu_f * (rho * d).ln() - ln_factorial(nu) + rho * d;
            if ln_mag > 700.0 {
                return None;
            }
            let mag = ln_mag.exp();
            if nu % 2 == 1 { -mag } else { mag }
        };
        magnitude += term.abs();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    if (1.0 - rho) * magnitude * f64::EPSILON * (n as f64 + 1.0).sqrt() > FORWARD_ERROR_BUDGET {
        return None;
    }
    Some(1.0 - (1.0 - rho) * sum)
}

/// Complementary form: since `(1−ρ) Σ_{k≥0} [ρ(k−τ)]^k/k! e^{−ρ(k−τ)} = 1`, the
/// tail probability equals `(1−ρ) Σ_{k>τ}` of the same, now positive, terms.
/// Terms up to `K` are summed directly and the remainder by the midpoint
/// Euler–Maclaurin formula.
fn tail_sum(rho: f64, tau: f64) -> f64 {
    let first = tau.floor() as u64 + 1;
    let k_split = first.max((4.0 * tau).ceil() as u64).max(400);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in first..k_split {
        let y = ln_tail_term(rho, tau, k as f64).exp() - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let a = k_split as f64 - 0.5;
    let f_a = ln_tail_term(rho, tau, a).exp();
    let decay = -(rho.ln() + 1.0 - rho);
    let remainder = if f_a == 0.0 {
        0.0
    } else {
        let scale = 1.0 / decay;
        let spec = QuadratureSpec::new(1e-13, 0.0, 2000).expect("valid spec");
        let integral = try_integrate(
            |u| Ok(ln_tail_term(rho, tau, a + scale * u).exp() * scale),
            0.0,
            f64::INFINITY,
            &spec,
        )
        .map(|e| e.value)
        .unwrap_or_else(|e| match e {
            Error::NonConvergence { estimate, .. } => estimate,
            _ => 0.0,
        });
        integral + tail_term_log_slope(rho, tau, a) * f_a / 24.0
    };
    (1.0 - rho) * (sum + remainder)
}

/// `ln([ρ(k−τ)]^k e^{−ρ(k−τ)} / k!)` for real `k > τ`, rearranged around
/// Stirling's series so the large logarithms cancel analytically.
fn ln_tail_term(rho: f64, tau: f64, k: f64) -> f64 {
    let d = k - tau;
    if k < 20.0 {
        return k * (rho * d).ln() - rho * d - ln_gamma(k + 1.0);
    }
    k * (rho.ln() + 1.0 - rho) + k * (-tau / k).ln_1p() + rho * tau
        - 0.5 * (2.0 * std::f64::consts::PI * k).ln()
        - stirling_correction(k)
}

fn stirling_correction(k: f64) -> f64 {
    let r = 1.0 / k;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)))
}

/// `d/dk` of [`ln_tail_term`] (valid for `k ≥ 20`).
fn tail_term_log_slope(rho: f64, tau: f64, k: f64) -> f64 {
    (rho * (k - tau)).ln() + k / (k - tau) - rho - digamma_large(k + 1.0)
}

fn digamma_large(x: f64) -> f64 {
    let r2 = 1.0 / (x * x);
    x.ln() - 0.5 / x - r2 * (1.0 / 12.0 - r2 * (1.0 / 120.0 - r2 / 252.0))
}

fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Asymptotic decay rate `η` of the tail, the positive root of `ρ(e^η − 1) = η`.
fn decay_rate(rho: f64) -> f64 {
    // g(η) = ρ(e^η − 1) − η is convex, vanishes at 0 and is negative at its minimum ln(1/ρ)
    let g = |eta: f64| rho * eta.exp_m1() - eta;
    let mut lo = (1.0 / rho).ln();
    let mut hi = 2.0 * lo.max(0.5);
    while g(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Smallest `T ≥ 0` with `P(T_w > T) ≤ p_tail`, to `1e-9·t_s`.
pub fn mdone_wait_quantile(rho: f64, t_s: f64, p_tail: f64) -> Result<f64> {
    check_queue("mdone_wait_quantile", rho, t_s)?;
    if !(p_tail > 0.0 && p_tail < 1.0) {
        return Err(Error::domain(
            "mdone_wait_quantile",
            format!("tail probability must lie in (0, 1), got {p_tail}"),
        ));
    }
    if rho <= p_tail {
        return Ok(0.0);
    }
    // closed form inside the first service interval
    let tau0 = ((1.0 - p_tail) / (1.0 - rho)).ln() / rho;
    if tau0 < 1.0 {
        return Ok(tau0 * t_s);
    }
    let f = |tau: f64| ccdf_normalized(rho, tau);
    let mut lo = 1.0f64;
    let mut hi = (10.0 / (1.0 - rho)).max(1.0);
    while f(hi) > p_tail {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::IterationLimit {
                func: "mdone_wait_quantile",
                iterations: 1024,
            });
        }
    }
    // invariant: f(lo) > p_tail ≥ f(hi)
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > p_tail {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi * t_s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uplink_arithmetic() {
        let tr = TrafficModel {
            s_resolution: 100.0,
            ..TrafficModel::default()
        };
        assert!((uplink_time(&tr, 1.2e6).unwrap() - 0.1).abs() < 1e-15);
        let big = TrafficModel {
            s_resolution: 200.0,
            ..tr
        };
        let ratio = uplink_time(&big, 1e6).unwrap() / uplink_time(&tr, 1e6).unwrap();
        assert!((ratio - 4.0).abs() < 1e-12);
        assert!(uplink_time(&tr, 0.0).is_err());
        assert!(uplink_time(&tr, 1e300).unwrap() < 1e-290);
    }

    #[test]
    fn service_and_accuracy() {
        let inf = InferenceModel::default();
        assert_eq!(service_time(&inf, 0.0).unwrap(), inf.c2);
        let ts = service_time(&inf, 424.42).unwrap();
        assert!((ts - 0.1365).abs() < 1e-4, "{ts}");
        let fast = InferenceModel { h_capacity: 2.0, ..inf };
        assert!((service_time(&fast, 300.0).unwrap() * 2.0 - service_time(&inf, 300.0).unwrap()).abs() < 1e-15);
        assert!((accuracy(&inf, 0.0) + 0.578).abs() < 1e-15);
        assert!((accuracy(&inf, 1e6) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn min_resolution_values() {
        let inf = InferenceModel::default();
        let s = min_resolution(&inf, 0.9).unwrap();
        assert!((s - 15.78f64.ln() / 0.0065).abs() < 1e-9);
        assert!((s - 424.42).abs() < 0.01);
        assert!((accuracy(&inf, s) - 0.9).abs() < 1e-12);
        assert!(min_resolution(&inf, inf.c3 - inf.c4).unwrap().abs() < 1e-12);
        assert!(min_resolution(&inf, 1.0).is_err());
        assert!(min_resolution(&inf, 1.0 - 1e-12).unwrap() > 4000.0);
    }

    #[test]
    fn ccdf_anchor_points() {
        assert_eq!(mdone_wait_ccdf(0.0, 0.1, 0.3).unwrap(), 0.0);
        for &rho in &[0.1, 0.5, 0.9] {
            assert!((mdone_wait_ccdf(rho, 0.2, 0.0).unwrap() - rho).abs() < 1e-15);
            let at_ts = mdone_wait_ccdf(rho, 0.2, 0.2).unwrap();
            let want = 1.0 - (1.0 - rho) * rho.exp();
            assert!((at_ts - want).abs() < 1e-12);
        }
        assert!(mdone_wait_ccdf(1.0, 0.1, 0.0).is_err());
        assert!(mdone_wait_ccdf(0.5, 0.0, 0.0).is_err());
        assert!(mdone_wait_ccdf(0.5, 0.1, -1.0).is_err());
    }

    // Reference values from the printed series evaluated at 60+ digit precision.
    #[test]
    fn ccdf_high_precision_reference() {
        let cases = [
            (0.6, 10.3, 4.224_627_166_743_1e-5),
            (0.9, 5.0, 0.331_290_849_491_559),
            (0.9, 80.7, 5.129_104_373_937_62e-8),
            (0.99, 1.5, 0.963_970_812_155_547),
            (0.99, 50.0, 0.364_202_685_509_953),
            (0.99, 80.7, 0.196_694_178_48),
        ];
        for &(rho, tau, want) in &cases {
            let got = mdone_wait_ccdf(rho, 1.0, tau).unwrap();
            assert!((got - want).abs() < 1e-11, "rho={rho} tau={tau}: {got} vs {want}");
        }
    }

    #[test]
    fn forward_and_tail_agree_where_both_apply() {
        for &rho in &[0.3, 0.6, 0.8] {
            for &tau in &[1.0, 1.7, 3.0, 6.5, 12.0] {
                if let Some(fwd) = forward_sum(rho, tau) {
                    let tail = tail_sum(rho, tau);
                    assert!((fwd - tail).abs() < 1e-12, "rho={rho} tau={tau}");
                }
            }
        }
    }

    #[test]
    fn far_tail_underflows_to_zero() {
        assert_eq!(mdone_wait_ccdf(0.5, 1.0, 1e6).unwrap(), 0.0);
        let p = mdone_wait_ccdf(0.99, 1.0, 2000.0).unwrap();
        assert!(p > 0.0 && p < 1e-15);
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(mdone_wait_quantile(0.0, 0.1, 0.2).unwrap(), 0.0);
        assert_eq!(mdone_wait_quantile(0.15, 0.1, 0.2).unwrap(), 0.0);
        // tail already met inside the first service interval
        let rho: f64 = 0.3;
        assert!(1.0 - (1.0 - rho) * rho.exp() <= 0.2);
        assert!(mdone_wait_quantile(rho, 0.1, 0.2).unwrap() <= 0.1);

        let t = mdone_wait_quantile(0.8, 0.1, 0.2).unwrap();
        assert!((mdone_wait_ccdf(0.8, 0.1, t).unwrap() - 0.2).abs() < 1e-9);
        assert!(mdone_wait_ccdf(0.8, 0.1, t).unwrap() <= 0.2);
        assert!(mdone_wait_ccdf(0.8, 0.1, t - 1e-7).unwrap() > 0.2);
    }

    #[test]
    fn decay_rate_root() {
        for &rho in &[0.05, 0.5, 0.99] {
            let eta = decay_rate(rho);
            assert!(eta > 0.0);
            assert!((rho * eta.exp_m1() - eta).abs() < 1e-12 * eta.max(1.0));
        }
    }
}

//! Uplink power control and ergodic capacities in the noise-limited and
//! interference-limited regimes.
//!
//! Units: km, W, Hz, W/Hz. The fading scale `γ = (λ_c/4π)²` uses the carrier
//! wavelength in km so that `γ·ℓ(r)·r^{-α}` matches the km distance convention.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{exp_integral_en_scaled_seq, try_integrate, QuadratureSpec};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Truncation point of the Rayleigh weight in `v = πλ_b u²`; `e^{-60}` is below double resolution.
const V_MAX: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Base-station density, km⁻².
    pub lambda_b: f64,
    /// Frequency reuse factor.
    pub delta: f64,
    /// Path-loss exponent.
    pub alpha: f64,
    /// Fractional power-control coefficient.
    pub epsilon: f64,
    /// Transmit power at 1 km, W.
    pub p_ref: f64,
    /// Peak transmit power, W.
    pub p_peak: f64,
    /// Noise power spectral density, W/Hz.
    pub n0: f64,
    /// Carrier frequency, Hz.
    pub f_c: f64,
    /// Receive antennas.
    pub m_antennas: u32,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            lambda_b: 1.0,
            delta: 4.0,
            alpha: 4.0,
            epsilon: 0.5,
            p_ref: dbm_to_watts(10.0),
            p_peak: dbm_to_watts(23.0),
            n0: dbm_to_watts(-174.0),
            f_c: 2.4e9,
            m_antennas: 16,
        }
    }
}

/// `10^{(dBm − 30)/10}`; also converts dBm/Hz to W/Hz.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda_b", self.lambda_b),
            ("p_ref", self.p_ref),
            ("p_peak", self.p_peak),
            ("n0", self.n0),
            ("f_c", self.f_c),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("network.{name} must be positive, got {v}")));
            }
        }
        if !(self.delta >= 1.0 && self.delta.is_finite()) {
            return Err(Error::Config(format!("network.delta must be >= 1, got {}", self.delta)));
        }
        if !(self.alpha > 2.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!("network.alpha must exceed 2, got {}", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::Config(format!(
                "network.epsilon must lie in [0, 1], got {}",
                self.epsilon
            )));
        }
        if self.m_antennas == 0 {
            return Err(Error::Config("network.m_antennas must be >= 1".into()));
        }
        Ok(())
    }

    /// Carrier wavelength in km.
    pub fn wavelength_km(&self) -> f64 {
        SPEED_OF_LIGHT / self.f_c / 1000.0
    }

    /// `γ = (λ_c/(4π))²`.
    pub fn gamma_fading(&self) -> f64 {
        (self.wavelength_km() / (4.0 * PI)).powi(2)
    }

    /// Distance where fractional control reaches the peak power; infinite when it never does.
    pub fn power_threshold(&self) -> f64 {
        if self.epsilon == 0.0 {
            if self.p_ref <= self.p_peak {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            (self.p_peak / self.p_ref).powf(1.0 / (self.alpha * self.epsilon))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerRegime {
    Fractional,
    Peak,
}

fn check_distance(func: &'static str, r: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(func, format!("distance must be positive, got {r}")));
    }
    Ok(())
}

fn check_bandwidth(func: &'static str, b: f64) -> Result<()> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(func, format!("bandwidth must be positive, got {b}")));
    }
    Ok(())
}

pub(crate) fn power_unchecked(cfg: &NetworkConfig, r: f64) -> f64 {
    (cfg.p_ref * r.powf(cfg.alpha * cfg.epsilon)).min(cfg.p_peak)
}

/// `ℓ(r) = min(P r^{αε}, P̄)`.
pub fn tx_power(cfg: &NetworkConfig, r: f64) -> Result<f64> {
    check_distance("tx_power", r)?;
    Ok(power_unchecked(cfg, r))
}

/// Transmit power of one branch of the min: `P r^{αε}` or `P̄`.
pub fn tx_power_regime(cfg: &NetworkConfig, r: f64, regime: PowerRegime) -> Result<f64> {
    check_distance("tx_power_regime", r)?;
    Ok(match regime {
        PowerRegime::Fractional => cfg.p_ref * r.powf(cfg.alpha * cfg.epsilon),
        PowerRegime::Peak => cfg.p_peak,
    })
}

pub(crate) fn desired_power(cfg: &NetworkConfig, r: f64, regime: Option<PowerRegime>) -> Result<f64> {
    match regime {
        Some(reg) => tx_power_regime(cfg, r, reg),
        None => tx_power(cfg, r),
    }
}

/// Mean SNR scale inverse `θ = B N₀ r^α / (γ ℓ)`.
pub fn snr_theta(cfg: &NetworkConfig, b: f64, r: f64, regime: Option<PowerRegime>) -> Result<f64> {
    cfg.validate()?;
    check_bandwidth("snr_theta", b)?;
    let ell = desired_power(cfg, r, regime)?;
    Ok(b * cfg.n0 * r.powf(cfg.alpha) / (cfg.gamma_fading() * ell))
}

/// Noise-limited ergodic capacity in bit/s: `(B/ln2) Σ_{i<M} e^θ E_{i+1}(θ)`.
pub fn capacity_nl(cfg: &NetworkConfig, b: f64, r: f64, regime: Option<PowerRegime>) -> Result<f64> {
    let theta = snr_theta(cfg, b, r, regime)?;
    let sum: f64 = exp_integral_en_scaled_seq(cfg.m_antennas, theta)?.iter().sum();
    Ok(b / LN_2 * sum)
}

fn nested_specs() -> (QuadratureSpec, QuadratureSpec, QuadratureSpec) {
    let outer = QuadratureSpec::default();
    let middle = outer.with_rel_tol(1e-9);
    let inner = outer.with_rel_tol(1e-10);
    (outer, middle, inner)
}

/// `β = E_u[q/(1+q)]` with `q = k·ℓ(u)/P̄` and `u` Rayleigh for density `λ_b`.
fn beta_mean(cfg: &NetworkConfig, k: f64, spec: &QuadratureSpec) -> Result<f64> {
    let k = k / cfg.p_peak;
    let frac = |ell: f64| {
        let q = k * ell;
        q / (1.0 + q)
    };
    if cfg.epsilon == 0.0 {
        return Ok(frac(cfg.p_ref.min(cfg.p_peak)));
    }
    let u_th = cfg.power_threshold();
    let v_th = PI * cfg.lambda_b * u_th * u_th;
    let expo = 0.5 * cfg.alpha * cfg.epsilon;
    let scale = cfg.p_ref * (PI * cfg.lambda_b).powf(-expo);
    let v_hi = v_th.min(V_MAX);
    let body = try_integrate(
        |v| Ok((-v).exp() * frac(scale * v.powf(expo))),
        0.0,
        v_hi,
        spec,
    )?
    .value;
    let tail = if v_th < V_MAX { (-v_th).exp() * frac(cfg.p_peak) } else { 0.0 };
    Ok(body + tail)
}

/// `ln L` for interferer terms `q = c·ℓ(u)·y^{-α}`, `y = x/r_guard ≥ 1`.
///
/// For large `c` the integrand is `≈ y` up to `y ~ c^{1/α}`, so the radial
/// variable is rescaled to `z = y·(cP̄)^{-1/α}` to keep the mass near unit scale.
fn log_laplace_normalized(
    cfg: &NetworkConfig,
    c: f64,
    r_guard: f64,
    middle: &QuadratureSpec,
    inner: &QuadratureSpec,
) -> Result<f64> {
    if c == 0.0 {
        return Ok(0.0);
    }
    let a = cfg.alpha;
    let cp = c * cfg.p_peak;
    let integral = if cp <= 1.0 {
        try_integrate(
            |y| Ok(beta_mean(cfg, cp * y.powf(-a), inner)? * y),
            1.0,
            f64::INFINITY,
            middle,
        )?
        .value
    } else {
        let z0 = cp.powf(-1.0 / a);
        let f = |z: f64| Ok(beta_mean(cfg, z.powf(-a), inner)? * z);
        let near = try_integrate(f, z0, 1.0, middle)?.value;
        let far = try_integrate(f, 1.0, f64::INFINITY, middle)?.value;
        cp.powf(2.0 / a) * (near + far)
    };
    Ok(-2.0 * PI * cfg.lambda_b / cfg.delta * r_guard * r_guard * integral)
}

/// Laplace transform of the aggregate interference at the base station of interest.
pub fn laplace_interference(cfg: &NetworkConfig, s: f64, r_guard: f64) -> Result<f64> {
    cfg.validate()?;
    if !(r_guard > 0.0 && r_guard.is_finite()) {
        return Err(Error::domain(
            "laplace_interference",
            format!("guard radius must be positive, got {r_guard}"),
        ));
    }
    if !(s >= 0.0) {
        return Err(Error::domain("laplace_interference", format!("s must be >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok(1.0);
    }
    let (_, middle, inner) = nested_specs();
    let c = s * cfg.gamma_fading() * r_guard.powf(-cfg.alpha);
    Ok(log_laplace_normalized(cfg, c, r_guard, &middle, &inner)?.exp())
}

/// Interference-limited spectral efficiency in bit/s/Hz; `C_IL = B·η`.
///
/// With `σ = s·γℓ(r)r^{-α}` the integral becomes
/// `∫ (1 − (1+σ)^{-M}) L(σ)/σ dσ`, which no longer depends on `γ` or `B`.
pub fn spectral_efficiency_il(cfg: &NetworkConfig, r: f64, regime: Option<PowerRegime>) -> Result<f64> {
    cfg.validate()?;
    let ell_d = desired_power(cfg, r, regime)?;
    let m = cfg.m_antennas as f64;
    let (outer, middle, inner) = nested_specs();
    let log_l = |sigma: f64| log_laplace_normalized(cfg, sigma / ell_d, r, &middle, &inner);
    // 1 − (1+σ)^{-M}, accurate for small σ
    let gain = |sigma: f64| -(-m * sigma.ln_1p()).exp_m1();

    let head = try_integrate(
        |sigma| {
            if sigma == 0.0 {
                return Ok(m);
            }
            Ok(gain(sigma) / sigma * log_l(sigma)?.exp())
        },
        0.0,
        1.0,
        &outer,
    )?
    .value;
    // σ = e^t turns the slowly decaying 1/σ tail into a super-exponential one.
    let tail = try_integrate(
        |t| {
            let sigma = t.exp();
            // L(σ) decays like exp(−c·σ^{2/α}) and is long past zero here
            if sigma > 1e200 {
                return Ok(0.0);
            }
            let l = log_l(sigma)?;
            Ok(gain(sigma) * l.exp())
        },
        0.0,
        f64::INFINITY,
        &outer,
    )?
    .value;
    Ok((head + tail) / LN_2)
}

/// Interference-limited ergodic capacity in bit/s.
pub fn capacity_il(cfg: &NetworkConfig, b: f64, r: f64, regime: Option<PowerRegime>) -> Result<f64> {
    check_bandwidth("capacity_il", b)?;
    Ok(b * spectral_efficiency_il(cfg, r, regime)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::integrate;

    fn baseline() -> NetworkConfig {
        NetworkConfig::default()
    }

    #[test]
    fn unit_conversions() {
        assert!((dbm_to_watts(10.0) - 0.01).abs() < 1e-15);
        assert!((dbm_to_watts(23.0) - 0.199_526_231_496_887_9).abs() < 1e-12);
        assert!((watts_to_dbm(dbm_to_watts(-174.0)) + 174.0).abs() < 1e-9);
        let g = baseline().gamma_fading();
        // free-space loss at 1 km and 2.4 GHz is about 100.05 dB
        assert!((10.0 * g.log10() + 100.046).abs() < 0.01, "{g}");
    }

    #[test]
    fn power_law_and_threshold() {
        let cfg = NetworkConfig {
            p_peak: 0.2,
            ..baseline()
        };
        assert!((tx_power(&cfg, 1.0).unwrap() - 0.01).abs() < 1e-15);
        let r_th = cfg.power_threshold();
        assert!((r_th - 20f64.sqrt()).abs() < 1e-12);
        assert!((tx_power(&cfg, 20f64.sqrt()).unwrap() - 0.2).abs() < 1e-12);
        let frac = tx_power_regime(&cfg, r_th, PowerRegime::Fractional).unwrap();
        let peak = tx_power_regime(&cfg, r_th, PowerRegime::Peak).unwrap();
        assert!((frac - peak).abs() < 1e-12);
        assert!(tx_power_regime(&cfg, 2.0, PowerRegime::Fractional).unwrap() < cfg.p_peak);
        for &r in &[0.1, 1.0, 4.0, 4.5, 10.0] {
            let lo = tx_power_regime(&cfg, r, PowerRegime::Fractional)
                .unwrap()
                .min(tx_power_regime(&cfg, r, PowerRegime::Peak).unwrap());
            assert_eq!(lo, tx_power(&cfg, r).unwrap());
        }
        let flat = NetworkConfig { epsilon: 0.0, ..cfg };
        assert_eq!(tx_power(&flat, 7.0).unwrap(), flat.p_ref);
        assert!(tx_power(&cfg, 0.0).is_err());
    }

    #[test]
    fn nl_single_antenna_matches_quadrature() {
        let cfg = NetworkConfig {
            m_antennas: 1,
            ..baseline()
        };
        let b = 1e6;
        let theta = snr_theta(&cfg, b, 1.0, None).unwrap();
        let spec = QuadratureSpec::new(1e-13, 0.0, 2000).unwrap();
        let e1 = integrate(|t| (-theta * t).exp() / t, 1.0, f64::INFINITY, &spec).unwrap();
        let want = b / LN_2 * theta.exp() * e1;
        let got = capacity_nl(&cfg, b, 1.0, None).unwrap();
        assert!(((got - want) / want).abs() < 1e-9);
    }

    #[test]
    fn nl_matches_shannon_expectation() {
        // E[ln(1 + X/θ)], X ~ Gamma(M, 1), by quadrature against the Gamma density
        let cfg = baseline();
        let theta = snr_theta(&cfg, 1e6, 1.0, None).unwrap();
        let m = cfg.m_antennas as f64;
        let lg = crate::specfun::ln_gamma(m);
        let spec = QuadratureSpec::new(1e-12, 0.0, 2000).unwrap();
        let nats = integrate(
            |x| ((m - 1.0) * x.ln() - x - lg).exp() * (x / theta).ln_1p(),
            0.0,
            f64::INFINITY,
            &spec,
        )
        .unwrap();
        let got = capacity_nl(&cfg, 1e6, 1.0, None).unwrap();
        assert!(((got - 1e6 * nats / LN_2) / got).abs() < 1e-9);
    }

    #[test]
    fn nl_monotone_in_antennas() {
        let c = |m| {
            let cfg = NetworkConfig {
                m_antennas: m,
                ..baseline()
            };
            capacity_nl(&cfg, 1e6, 1.0, None).unwrap()
        };
        assert!(c(16) > c(4) && c(4) > c(1));
    }

    #[test]
    fn laplace_basic_properties() {
        let cfg = baseline();
        assert_eq!(laplace_interference(&cfg, 0.0, 0.7).unwrap(), 1.0);
        let mut prev = 1.0;
        for k in 0..13 {
            let s = 10f64.powf(-3.0 + 0.5 * k as f64) / cfg.gamma_fading();
            let l = laplace_interference(&cfg, s, 0.7).unwrap();
            assert!(l <= prev && l > 0.0, "s={s}");
            prev = l;
        }
        assert!(laplace_interference(&cfg, 1.0, 0.0).is_err());
    }

    #[test]
    fn il_equivalence_at_fixed_distance() {
        let a = NetworkConfig {
            epsilon: 0.0,
            lambda_b: 1.0,
            delta: 4.0,
            ..baseline()
        };
        let b = NetworkConfig {
            lambda_b: 2.0,
            delta: 8.0,
            ..a
        };
        for &r in &[0.3, 1.0] {
            let ca = spectral_efficiency_il(&a, r, None).unwrap();
            let cb = spectral_efficiency_il(&b, r, None).unwrap();
            assert!(((ca - cb) / ca).abs() < 1e-6, "r={r}: {ca} vs {cb}");
        }
    }

    #[test]
    fn il_decreases_with_interferer_density() {
        let mut prev = f64::INFINITY;
        for &lb in &[0.5, 1.0, 2.0, 4.0] {
            let cfg = NetworkConfig {
                lambda_b: lb,
                ..baseline()
            };
            let c = spectral_efficiency_il(&cfg, 0.5, None).unwrap();
            assert!(c < prev, "lambda_b={lb}");
            prev = c;
        }
    }

    #[test]
    fn il_is_linear_in_bandwidth_and_independent_of_wavelength() {
        let cfg = baseline();
        let c1 = capacity_il(&cfg, 1e6, 0.6, None).unwrap();
        let c2 = capacity_il(&cfg, 3e6, 0.6, None).unwrap();
        assert!((c2 / c1 - 3.0).abs() < 1e-12);
        let other = NetworkConfig { f_c: 3.5e9, ..cfg };
        let c3 = capacity_il(&other, 1e6, 0.6, None).unwrap();
        assert!(((c3 - c1) / c1).abs() < 1e-12);
    }
}

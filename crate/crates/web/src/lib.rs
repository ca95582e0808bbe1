//! WebAssembly bindings for the browser demo.
//!
//! Every export returns a JSON string; failures come back as `{"error": "..."}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use edgedim::capacity::{capacity_il, capacity_nl, NetworkConfig};
use edgedim::dimension::{rho_threshold, solve, Regime, Scenario};
use edgedim::offload::mdone_wait_ccdf;
use edgedim::Error;

fn regime(name: &str) -> Result<Regime, String> {
    match name {
        "noise_limited" => Ok(Regime::NoiseLimited),
        "interference_limited" => Ok(Regime::InterferenceLimited),
        other => Err(format!("unknown regime {other:?}")),
    }
}

fn respond(res: Result<Value, String>) -> String {
    match res {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

/// Capacity over `n` distances evenly spaced in `(0, r_max]`.
pub fn capacity_curve_value(
    regime_name: &str,
    epsilon: f64,
    m_antennas: u32,
    bandwidth: f64,
    r_max: f64,
    n: usize,
) -> Result<Value, String> {
    let regime = regime(regime_name)?;
    if !(r_max > 0.0 && r_max.is_finite()) || n == 0 || n > 10_000 {
        return Err("r_max must be positive and n in 1..=10000".into());
    }
    let cfg = NetworkConfig {
        epsilon,
        m_antennas,
        ..NetworkConfig::default()
    };
    cfg.validate().map_err(|e| e.to_string())?;
    let r: Vec<f64> = (1..=n).map(|i| r_max * i as f64 / n as f64).collect();
    let capacity = r
        .iter()
        .map(|&r| match regime {
            Regime::NoiseLimited => capacity_nl(&cfg, bandwidth, r, None),
            Regime::InterferenceLimited => capacity_il(&cfg, bandwidth, r, None),
        })
        .collect::<Result<Vec<f64>, Error>>()
        .map_err(|e| e.to_string())?;
    let r_th = cfg.power_threshold();
    Ok(json!({
        "r": r,
        "capacity": capacity,
        "r_th": if r_th.is_finite() { Some(r_th) } else { None },
    }))
}

/// Optimal resources for the baseline scenario with the given overrides.
pub fn dimension_value(
    regime_name: &str,
    lambda_b: f64,
    delta: f64,
    lambda_rate: f64,
    d_max: f64,
    beta1: f64,
) -> Result<Value, String> {
    let regime = regime(regime_name)?;
    let mut s = Scenario::default();
    s.network.lambda_b = lambda_b;
    s.network.delta = delta;
    s.traffic.lambda_rate = lambda_rate;
    s.qos.d_max = d_max;
    s.cost.beta1 = beta1;
    s.validate().map_err(|e| e.to_string())?;
    match solve(&s, regime) {
        Ok(sol) => Ok(json!({
            "status": "ok",
            "solution": sol,
            "per_frame_compute": sol.compute_per_frame(&s.traffic),
            "rho_threshold": rho_threshold(s.qos.omega_min),
            "guaranteed": sol.certificate.holds(),
        })),
        Err(Error::Infeasible { cause, detail }) => Ok(json!({
            "status": "infeasible",
            "binding": cause,
            "detail": detail,
        })),
        Err(e) => Err(e.to_string()),
    }
}

/// M/D/1 waiting-time CCDF on `n + 1` points of `[0, t_max]` in units of the service time.
pub fn wait_ccdf_value(rho: f64, t_max: f64, n: usize) -> Result<Value, String> {
    if !(t_max > 0.0 && t_max.is_finite()) || n == 0 || n > 10_000 {
        return Err("t_max must be positive and n in 1..=10000".into());
    }
    let t: Vec<f64> = (0..=n).map(|i| t_max * i as f64 / n as f64).collect();
    let ccdf = t
        .iter()
        .map(|&t| mdone_wait_ccdf(rho, 1.0, t))
        .collect::<Result<Vec<f64>, Error>>()
        .map_err(|e| e.to_string())?;
    Ok(json!({ "t": t, "ccdf": ccdf }))
}

#[wasm_bindgen]
pub fn capacity_curve(regime: &str, epsilon: f64, m_antennas: u32, bandwidth: f64, r_max: f64, n: usize) -> String {
    respond(capacity_curve_value(regime, epsilon, m_antennas, bandwidth, r_max, n))
}

#[wasm_bindgen]
pub fn dimension(regime: &str, lambda_b: f64, delta: f64, lambda_rate: f64, d_max: f64, beta1: f64) -> String {
    respond(dimension_value(regime, lambda_b, delta, lambda_rate, d_max, beta1))
}

#[wasm_bindgen]
pub fn wait_ccdf(rho: f64, t_max: f64, n: usize) -> String {
    respond(wait_ccdf_value(rho, t_max, n))
}

use edgedim_web::{capacity_curve, dimension, wait_ccdf};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn capacity_curve_decreases_with_distance() {
    let v = parse(capacity_curve("noise_limited", 0.5, 16, 1e6, 3.0, 30));
    let c: Vec<f64> = serde_json::from_value(v["capacity"].clone()).unwrap();
    assert_eq!(c.len(), 30);
    assert!(c.windows(2).all(|w| w[1] <= w[0]));
    assert!(v["r_th"].as_f64().unwrap() > 0.0);
}

#[test]
fn baseline_dimensioning_is_feasible() {
    let v = parse(dimension("noise_limited", 1.0, 4.0, 100.0, 0.5, 0.5));
    assert_eq!(v["status"], "ok");
    let rho = v["solution"]["rho_opt"].as_f64().unwrap();
    assert!(rho > 0.0 && rho <= 0.99);
}

#[test]
fn tiny_deadline_reports_binding() {
    let v = parse(dimension("noise_limited", 1.0, 4.0, 100.0, 1e-6, 0.5));
    assert_eq!(v["status"], "infeasible");
    assert!(v["binding"].is_string());
}

#[test]
fn wait_ccdf_starts_at_load() {
    let v = parse(wait_ccdf(0.6, 5.0, 50));
    let c: Vec<f64> = serde_json::from_value(v["ccdf"].clone()).unwrap();
    assert!((c[0] - 0.6).abs() < 1e-12);
    assert!(c.windows(2).all(|w| w[1] <= w[0] + 1e-15));
}

#[test]
fn bad_inputs_come_back_as_errors() {
    assert!(parse(capacity_curve("mixed", 0.5, 16, 1e6, 3.0, 30))["error"].is_string());
    assert!(parse(wait_ccdf(1.5, 5.0, 10))["error"].is_string());
    assert!(parse(dimension("noise_limited", -1.0, 4.0, 100.0, 0.5, 0.5))["error"].is_string());
}

//! Sweep axes.
//!
//! A value list is either comma separated (`0.25,0.5,1`) or a range
//! `start:stop:n` (linear) or `start:stop:n:log` (geometric), endpoints included.
//! An axis is `name=values`; several axes form a Cartesian product with the
//! first axis outermost.

use crate::config::ScenarioConfig;

pub fn parse_values(text: &str) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty value list".into());
    }
    if text.contains(':') {
        return parse_range(text);
    }
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("not a finite number: {tok:?}"))
        })
        .collect()
}

fn parse_range(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let (log, parts) = match parts.as_slice() {
        [a, b, n] => (false, [*a, *b, *n]),
        [a, b, n, "log"] => (true, [*a, *b, *n]),
        [a, b, n, "lin"] => (false, [*a, *b, *n]),
        _ => return Err(format!("range must be start:stop:n[:log], got {text:?}")),
    };
    let num = |s: &str| {
        s.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("not a finite number: {s:?}"))
    };
    let (a, b) = (num(parts[0])?, num(parts[1])?);
    let n: usize = parts[2]
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("point count must be a positive integer, got {:?}", parts[2]))?;
    if log && !(a > 0.0 && b > 0.0) {
        return Err(format!("log range needs positive endpoints, got {a} and {b}"));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let step = |i: usize| i as f64 / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else if log {
                (a.ln() + (b.ln() - a.ln()) * step(i)).exp()
            } else {
                a + (b - a) * step(i)
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, values: Vec<f64>, extra: &[&'static str]) -> Result<Self, String> {
        let name = canonical(name, extra).ok_or_else(|| {
            let mut known: Vec<&str> = PARAMETERS.iter().map(|p| p.0).collect();
            known.extend(extra);
            format!("unknown sweep parameter {name:?}; known: {}", known.join(", "))
        })?;
        if values.is_empty() {
            return Err(format!("axis {name} has no values"));
        }
        Ok(Self { name, values })
    }

    pub fn parse(spec: &str, extra: &[&'static str]) -> Result<Self, String> {
        let (name, values) = spec
            .split_once('=')
            .ok_or_else(|| format!("axis must look like name=values, got {spec:?}"))?;
        let values = parse_values(values).map_err(|e| format!("axis {}: {e}", name.trim()))?;
        Self::new(name.trim(), values, extra)
    }
}

/// Every combination of axis values, first axis outermost.
pub fn product(axes: &[Axis]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Scenario parameters that can be swept, with accepted aliases.
const PARAMETERS: &[(&str, &[&str])] = &[
    ("lambda_b", &[]),
    ("delta", &[]),
    ("alpha", &[]),
    ("epsilon", &["eps"]),
    ("p_ref_dbm", &[]),
    ("p_peak_dbm", &[]),
    ("n0_dbm_per_hz", &[]),
    ("f_c_hz", &[]),
    ("m_antennas", &["m"]),
    ("lambda_rate", &["lambda"]),
    ("theta_bits", &["theta"]),
    ("xi_compress", &["xi"]),
    ("d_max", &[]),
    ("omega_min", &[]),
    ("eta_r", &[]),
    ("eta_a", &[]),
    ("a_min", &[]),
    ("rho_max", &[]),
    ("beta1", &[]),
    ("beta2", &[]),
    ("vartheta", &[]),
];

fn canonical(name: &str, extra: &[&'static str]) -> Option<&'static str> {
    let lower = name.to_ascii_lowercase();
    if let Some(e) = extra.iter().find(|e| **e == lower) {
        return Some(e);
    }
    PARAMETERS
        .iter()
        .find(|(c, aliases)| *c == lower || aliases.contains(&lower.as_str()))
        .map(|(c, _)| *c)
}

/// Sets one canonical scenario parameter.
pub fn apply(cfg: &mut ScenarioConfig, name: &str, v: f64) -> Result<(), String> {
    let n = &mut cfg.network;
    match name {
        "lambda_b" => n.lambda_b = v,
        "delta" => n.delta = v,
        "alpha" => n.alpha = v,
        "epsilon" => n.epsilon = v,
        "p_ref_dbm" => n.p_ref_dbm = v,
        "p_peak_dbm" => n.p_peak_dbm = v,
        "n0_dbm_per_hz" => n.n0_dbm_per_hz = v,
        "f_c_hz" => n.f_c_hz = v,
        "m_antennas" => {
            if !(v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64) {
                return Err(format!("m_antennas must be a positive integer, got {v}"));
            }
            n.m_antennas = v as u32;
        }
        "lambda_rate" => cfg.traffic.lambda_rate = v,
        "theta_bits" => cfg.traffic.theta_bits = v,
        "xi_compress" => cfg.traffic.xi_compress = v,
        "d_max" => cfg.qos.d_max = v,
        "omega_min" => cfg.qos.omega_min = v,
        "eta_r" => cfg.qos.eta_r = v,
        "eta_a" => cfg.qos.eta_a = v,
        "a_min" => cfg.qos.a_min = v,
        "rho_max" => cfg.qos.rho_max = v,
        "beta1" => cfg.cost.beta1 = v,
        "beta2" => cfg.cost.beta2 = v,
        "vartheta" => cfg.cost.vartheta = v,
        other => return Err(format!("{other} is not a scenario parameter")),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists() {
        assert_eq!(parse_values("1, 2.5,4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert_eq!(parse_values("0:1:5").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = parse_values("1e5:1e7:3:log").unwrap();
        assert_eq!(g[0], 1e5);
        assert!((g[1] / 1e6 - 1.0).abs() < 1e-14);
        assert_eq!(g[2], 1e7);
        assert_eq!(parse_values("3:9:1").unwrap(), vec![3.0]);
        for bad in ["", " ", "1,,2", "a", "0:1", "0:1:0", "-1:1:3:log", "1:2:3:cubic", "nan"] {
            assert!(parse_values(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn axes_and_products() {
        let a = Axis::parse("lambda=50,100", &[]).unwrap();
        assert_eq!(a.name, "lambda_rate");
        let b = Axis::parse("r=0.1,0.2,0.3", &["r"]).unwrap();
        let p = product(&[a, b]);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![50.0, 0.1]);
        assert_eq!(p[3], vec![100.0, 0.1]);
        assert!(Axis::parse("r=0.1", &[]).unwrap_err().contains("unknown sweep parameter"));
        assert!(Axis::parse("lambda_b", &[]).is_err());
        assert!(Axis::parse("lambda_b=", &[]).is_err());
        assert_eq!(product(&[]), vec![Vec::<f64>::new()]);
    }

    #[test]
    fn apply_reaches_every_parameter() {
        for (name, _) in PARAMETERS {
            let mut cfg = ScenarioConfig::default();
            apply(&mut cfg, name, 3.0).unwrap();
            assert_ne!(cfg, ScenarioConfig::default(), "{name}");
        }
        let mut cfg = ScenarioConfig::default();
        assert!(apply(&mut cfg, "m_antennas", 2.5).is_err());
    }
}

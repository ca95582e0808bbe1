//! Scenario files.
//!
//! A scenario is one TOML document whose sections mirror the core types.
//! Every key is optional and defaults to the baseline scenario. Powers are
//! written in dBm and converted at load time with `P[W] = 10^((P[dBm] − 30)/10)`;
//! the noise density uses the same formula per Hz.

use serde::{Deserialize, Serialize};

use edgedim::capacity::{dbm_to_watts, NetworkConfig};
use edgedim::dimension::{CostSpec, QosSpec, Regime, Scenario};
use edgedim::geometry::GeneralizedGamma;
use edgedim::montecarlo::SimSeed;
use edgedim::offload::{InferenceModel, TrafficModel};

/// Header written in front of every generated scenario file.
pub const HEADER: &str = "\
# edgedim scenario. Every key is optional; omitted keys take the baseline value.
# Powers are in dBm and converted on load with P[W] = 10^((P[dBm] - 30) / 10);
# n0_dbm_per_hz is converted the same way to W/Hz. Distances are km, areas km^2.
";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    /// Base stations per km².
    pub lambda_b: f64,
    pub delta: f64,
    pub alpha: f64,
    pub epsilon: f64,
    /// Reference power at 1 km.
    pub p_ref_dbm: f64,
    pub p_peak_dbm: f64,
    pub n0_dbm_per_hz: f64,
    pub f_c_hz: f64,
    pub m_antennas: u32,
}

impl Default for NetworkSection {
    fn default() -> Self {
        let n = NetworkConfig::default();
        Self {
            lambda_b: n.lambda_b,
            delta: n.delta,
            alpha: n.alpha,
            epsilon: n.epsilon,
            p_ref_dbm: 10.0,
            p_peak_dbm: 23.0,
            n0_dbm_per_hz: -174.0,
            f_c_hz: n.f_c,
            m_antennas: n.m_antennas,
        }
    }
}

impl NetworkSection {
    pub fn to_config(&self) -> NetworkConfig {
        NetworkConfig {
            lambda_b: self.lambda_b,
            delta: self.delta,
            alpha: self.alpha,
            epsilon: self.epsilon,
            p_ref: dbm_to_watts(self.p_ref_dbm),
            p_peak: dbm_to_watts(self.p_peak_dbm),
            n0: dbm_to_watts(self.n0_dbm_per_hz),
            f_c: self.f_c_hz,
            m_antennas: self.m_antennas,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_distance: Option<GeneralizedGamma>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area: Option<GeneralizedGamma>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub regime: Regime,
    pub network: NetworkSection,
    pub traffic: TrafficModel,
    pub inference: InferenceModel,
    pub qos: QosSpec,
    pub cost: CostSpec,
    pub geometry: GeometrySection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    pub seed: SimSeed,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            regime: Regime::NoiseLimited,
            network: NetworkSection::default(),
            traffic: TrafficModel::default(),
            inference: InferenceModel::default(),
            qos: QosSpec::default(),
            cost: CostSpec::default(),
            geometry: GeometrySection::default(),
            sweep: None,
            seed: SimSeed::new(1),
        }
    }
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: Self = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.scenario().validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        let body = toml::to_string(self).expect("scenario config serializes");
        format!("{HEADER}\n{body}")
    }

    /// Core scenario in linear units.
    pub fn scenario(&self) -> Scenario {
        let base = Scenario::default();
        Scenario {
            network: self.network.to_config(),
            traffic: self.traffic,
            inference: self.inference,
            qos: self.qos,
            cost: self.cost,
            max_dist_fit: self.geometry.max_distance.unwrap_or(base.max_dist_fit),
            area_fit: self.geometry.area.unwrap_or(base.area_fit),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_baseline() {
        let cfg = ScenarioConfig::parse("").unwrap();
        assert_eq!(cfg, ScenarioConfig::default());
        let s = cfg.scenario();
        assert!((s.network.p_ref - 0.01).abs() < 1e-15);
        assert!((s.network.p_peak - 0.199_526_231_496_887_9).abs() < 1e-12);
        assert!((s.network.n0 / 3.981_071_705_534_97e-21 - 1.0).abs() < 1e-12);
        assert_eq!(s.qos, QosSpec::default());
        assert_eq!(s.cost.beta1, 0.5);
        assert_eq!(s.traffic.theta_bits, 24.0);
    }

    #[test]
    fn round_trip_is_identity() {
        let mut cfg = ScenarioConfig {
            regime: Regime::InterferenceLimited,
            ..ScenarioConfig::default()
        };
        cfg.network.p_ref_dbm = 7.25;
        cfg.qos.d_max = 0.3;
        cfg.geometry.area = Some(GeneralizedGamma::new(1.0, 3.6, 3.6).unwrap());
        cfg.sweep = Some(SweepSection {
            parameter: "lambda_b".into(),
            values: vec![0.25, 0.1 + 0.2, 4.0],
        });
        cfg.seed = SimSeed::new(99).with_stream(3);
        let text = cfg.to_toml();
        assert!(text.starts_with("# edgedim scenario"));
        assert_eq!(ScenarioConfig::parse(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_and_invalid_fields_are_named() {
        let e = ScenarioConfig::parse("[qos]\nd_maxx = 1.0\n").unwrap_err();
        assert!(e.contains("d_maxx"), "{e}");
        let e = ScenarioConfig::parse("[qos]\nomega_min = 1.5\n").unwrap_err();
        assert!(e.contains("qos.omega_min"), "{e}");
        let e = ScenarioConfig::parse("[network]\nepsilon = 2.0\n").unwrap_err();
        assert!(e.contains("network.epsilon"), "{e}");
    }
}

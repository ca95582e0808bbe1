//! Poisson–Voronoi distance and area laws.
//!
//! Distances are in km and areas in km². The fits are stated for the
//! normalized variables `r̄ = √λ_b·r` and `Ā = λ_b·A`; the κ helpers accept
//! and return physical units.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{reg_lower_gamma, reg_lower_gamma_inv};

/// Generalized gamma law with density `∝ t^{γ−1} e^{−β t^α}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralizedGamma {
    pub shape_alpha: f64,
    pub rate_beta: f64,
    pub shape_gamma: f64,
}

impl GeneralizedGamma {
    /// Fit for the normalized maximum user distance of a typical cell.
    pub const MAX_DISTANCE: Self = Self {
        shape_alpha: 1.719,
        rate_beta: 5.528,
        shape_gamma: 9.482,
    };

    /// Fit for the normalized area of a typical cell.
    pub const CELL_AREA: Self = Self {
        shape_alpha: 1.0,
        rate_beta: 3.5,
        shape_gamma: 3.5,
    };

    pub fn new(shape_alpha: f64, rate_beta: f64, shape_gamma: f64) -> Result<Self> {
        let d = Self {
            shape_alpha,
            rate_beta,
            shape_gamma,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("shape_alpha", self.shape_alpha),
            ("rate_beta", self.rate_beta),
            ("shape_gamma", self.shape_gamma),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "generalized gamma {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    fn gamma_shape(&self) -> f64 {
        self.shape_gamma / self.shape_alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryModel {
    /// Base-station density, km⁻².
    pub lambda_b: f64,
    pub max_dist_fit: GeneralizedGamma,
    pub area_fit: GeneralizedGamma,
}

impl GeometryModel {
    pub fn new(lambda_b: f64) -> Result<Self> {
        let m = Self {
            lambda_b,
            max_dist_fit: GeneralizedGamma::MAX_DISTANCE,
            area_fit: GeneralizedGamma::CELL_AREA,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_b > 0.0 && self.lambda_b.is_finite()) {
            return Err(Error::Config(format!(
                "lambda_b must be positive, got {}",
                self.lambda_b
            )));
        }
        self.max_dist_fit.validate()?;
        self.area_fit.validate()
    }
}

/// CDF of the normalized nearest base-station distance, `1 − e^{−πx²}`.
pub fn distance_cdf(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("distance_cdf", format!("x must be >= 0, got {x}")));
    }
    Ok(-(-std::f64::consts::PI * x * x).exp_m1())
}

pub fn gen_gamma_cdf(d: &GeneralizedGamma, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("gen_gamma_cdf", format!("x must be >= 0, got {x}")));
    }
    d.validate()?;
    reg_lower_gamma(d.gamma_shape(), d.rate_beta * x.powf(d.shape_alpha))
}

pub fn gen_gamma_quantile(d: &GeneralizedGamma, p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::domain(
            "gen_gamma_quantile",
            format!("p must lie in [0, 1), got {p}"),
        ));
    }
    d.validate()?;
    let y = reg_lower_gamma_inv(d.gamma_shape(), p)?;
    Ok((y / d.rate_beta).powf(1.0 / d.shape_alpha))
}

fn check_prob(func: &'static str, p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(func, format!("probability must lie in (0, 1), got {p}")));
    }
    Ok(())
}

/// Worst-case serving distance (km): the `eta_r` quantile of the maximum user distance.
pub fn kappa3(model: &GeometryModel, eta_r: f64) -> Result<f64> {
    check_prob("kappa3", eta_r)?;
    model.validate()?;
    Ok(gen_gamma_quantile(&model.max_dist_fit, eta_r)? / model.lambda_b.sqrt())
}

/// Worst-case cell area (km²): the `eta_a` quantile of the cell area.
pub fn kappa4(model: &GeometryModel, eta_a: f64) -> Result<f64> {
    check_prob("kappa4", eta_a)?;
    model.validate()?;
    Ok(gen_gamma_quantile(&model.area_fit, eta_a)? / model.lambda_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate, ln_gamma, QuadratureSpec};

    #[test]
    fn rayleigh_cdf() {
        assert_eq!(distance_cdf(0.0).unwrap(), 0.0);
        let median = (2f64.ln() / std::f64::consts::PI).sqrt();
        assert!((distance_cdf(median).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(distance_cdf(10.0).unwrap(), 1.0);
        assert!(distance_cdf(-0.1).is_err());
    }

    #[test]
    fn area_fit_is_standard_gamma() {
        let d = GeneralizedGamma::CELL_AREA;
        assert_eq!(gen_gamma_cdf(&d, 0.0).unwrap(), 0.0);
        for &x in &[0.1, 1.0, 3.0] {
            let want = reg_lower_gamma(3.5, 3.5 * x).unwrap();
            assert!((gen_gamma_cdf(&d, x).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn max_distance_fit_matches_quadrature() {
        let d = GeneralizedGamma::MAX_DISTANCE;
        let (a, b, g) = (d.shape_alpha, d.rate_beta, d.shape_gamma);
        let log_norm = a.ln() + (g / a) * b.ln() - ln_gamma(g / a);
        let spec = QuadratureSpec::new(1e-12, 0.0, 2000).unwrap();
        let want = integrate(
            |t| (log_norm + (g - 1.0) * t.ln() - b * t.powf(a)).exp(),
            0.0,
            1.0,
            &spec,
        )
        .unwrap();
        assert!((gen_gamma_cdf(&d, 1.0).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn quantile_round_trips() {
        for d in [GeneralizedGamma::MAX_DISTANCE, GeneralizedGamma::CELL_AREA] {
            assert_eq!(gen_gamma_quantile(&d, 0.0).unwrap(), 0.0);
            let x = gen_gamma_quantile(&d, 0.8).unwrap();
            assert!((gen_gamma_cdf(&d, x).unwrap() - 0.8).abs() < 1e-9);
        }
        let x = gen_gamma_quantile(&GeneralizedGamma::CELL_AREA, 0.999).unwrap();
        assert!((reg_lower_gamma(3.5, 3.5 * x).unwrap() - 0.999).abs() < 1e-10);
        assert!(gen_gamma_quantile(&GeneralizedGamma::CELL_AREA, 1.0).is_err());
    }

    #[test]
    fn kappa_scaling() {
        let m1 = GeometryModel::new(1.0).unwrap();
        let m2 = GeometryModel::new(2.0).unwrap();
        let m4 = GeometryModel::new(4.0).unwrap();
        let k1 = kappa3(&m1, 0.999).unwrap();
        assert_eq!(k1, gen_gamma_quantile(&GeneralizedGamma::MAX_DISTANCE, 0.999).unwrap());
        assert!((kappa3(&m2, 0.999).unwrap() * 2f64.sqrt() - k1).abs() < 1e-14);
        assert!((kappa3(&m4, 0.999).unwrap() * 2.0 - k1).abs() < 1e-15);

        let a1 = kappa4(&m1, 0.999).unwrap();
        assert!((a1 - reg_lower_gamma_inv(3.5, 0.999).unwrap() / 3.5).abs() < 1e-14);
        assert!((kappa4(&m2, 0.999).unwrap() * 2.0 - a1).abs() < 1e-14);
        assert!(kappa4(&m1, 1e-12).unwrap() < 1e-3);
    }

    #[test]
    fn kappas_increase_with_confidence() {
        let m = GeometryModel::new(1.5).unwrap();
        let mut prev = (0.0, 0.0);
        for &p in &[0.1, 0.5, 0.9, 0.99, 0.999] {
            let k = (kappa3(&m, p).unwrap(), kappa4(&m, p).unwrap());
            assert!(k.0 > prev.0 && k.1 > prev.1);
            prev = k;
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(GeometryModel::new(0.0).is_err());
        assert!(GeneralizedGamma::new(1.0, -1.0, 1.0).is_err());
        assert!(kappa3(&GeometryModel::new(1.0).unwrap(), 1.0).is_err());
        assert!(kappa4(&GeometryModel::new(1.0).unwrap(), 0.0).is_err());
    }
}

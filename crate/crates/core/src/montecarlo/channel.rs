//! Fading and co-channel interference simulation.

use std::f64::consts::{LN_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

use super::spatial::{norm, ppp_in_square, sub, voronoi_cell};
use super::{check_count, chunk_rng, map_chunks, reduce, McEstimate, Moments, SimSeed, SimWindow};
use crate::capacity::{desired_power, power_unchecked, NetworkConfig, PowerRegime};
use crate::error::{Error, Result};

const CHUNK: u64 = 1 << 14;

/// Mean of `B·log₂(1+SNR)` over Gamma(M, γ) channel gains.
pub fn mc_capacity_nl(
    cfg: &NetworkConfig,
    b: f64,
    r: f64,
    regime: Option<PowerRegime>,
    n_samples: u64,
    seed: SimSeed,
) -> Result<McEstimate> {
    cfg.validate()?;
    check_count("mc_capacity_nl", n_samples)?;
    let ell = desired_power(cfg, r, regime)?;
    let snr_scale = cfg.gamma_fading() * ell * r.powf(-cfg.alpha) / (cfg.n0 * b);
    let gain = Gamma::new(cfg.m_antennas as f64, snr_scale)
        .map_err(|e| Error::domain("mc_capacity_nl", e.to_string()))?;
    let parts = map_chunks(n_samples, CHUNK, |k, len| {
        let mut rng = chunk_rng(seed, k);
        let mut m = Moments::default();
        for _ in 0..len {
            let snr: f64 = gain.sample(&mut rng);
            m.push(b * snr.ln_1p() / LN_2);
        }
        m
    });
    Ok(reduce(parts))
}

/// One co-channel interferer seen from the base station of interest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interferer {
    /// Distance to the base station of interest, km.
    pub d: f64,
    /// Distance to its own base station, km.
    pub r: f64,
    /// Projected channel gain, mean `γ`.
    pub fade: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceField {
    pub guard: f64,
    pub interferers: Vec<Interferer>,
}

impl InterferenceField {
    pub fn total(&self, cfg: &NetworkConfig) -> f64 {
        self.interferers
            .iter()
            .map(|z| z.fade * power_unchecked(cfg, z.r) * z.d.powf(-cfg.alpha))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterfererModel {
    /// Co-channel users at PPP(λ_b/δ) positions outside the guard, `r_z` i.i.d. Rayleigh.
    #[default]
    Iid,
    /// Full base-station PPP, random channel per cell, one uniform user per co-channel cell.
    Exact,
}

fn sample_field<R: Rng>(
    cfg: &NetworkConfig,
    r: f64,
    w: f64,
    model: InterfererModel,
    rng: &mut R,
) -> InterferenceField {
    let gamma = cfg.gamma_fading();
    let fade = |rng: &mut R| -> f64 { gamma * <Exp1 as Distribution<f64>>::sample(&Exp1, rng) };
    let interferers = match model {
        InterfererModel::Iid => {
            let pts = ppp_in_square(cfg.lambda_b / cfg.delta, w, rng);
            pts.into_iter()
                .map(norm)
                .filter(|&d| d >= r)
                .map(|d| {
                    let u: f64 = 1.0 - rng.random::<f64>();
                    Interferer {
                        d,
                        r: (-u.ln() / (PI * cfg.lambda_b)).sqrt(),
                        fade: fade(rng),
                    }
                })
                .collect()
        }
        InterfererModel::Exact => {
            let user = [r, 0.0];
            let mut sites = vec![[0.0, 0.0]];
            sites.extend(ppp_in_square(cfg.lambda_b, w, rng).into_iter().filter(|&p| norm(sub(p, user)) >= r));
            let p_cochannel = 1.0 / cfg.delta;
            let mut out = Vec::new();
            for i in 1..sites.len() {
                if rng.random::<f64>() >= p_cochannel {
                    continue;
                }
                let cell = voronoi_cell(&sites, i, w);
                let u = uniform_in_polygon(&cell, rng);
                out.push(Interferer {
                    d: norm(u),
                    r: norm(sub(u, sites[i])),
                    fade: fade(rng),
                });
            }
            out
        }
    };
    InterferenceField { guard: r, interferers }
}

fn uniform_in_polygon<R: Rng>(poly: &[[f64; 2]], rng: &mut R) -> [f64; 2] {
    let o = poly[0];
    let tri_area = |i: usize| 0.5 * (sub(poly[i], o)[0] * sub(poly[i + 1], o)[1] - sub(poly[i + 1], o)[0] * sub(poly[i], o)[1]).abs();
    let total: f64 = (1..poly.len() - 1).map(tri_area).sum();
    let mut pick = rng.random::<f64>() * total;
    let mut i = 1;
    while i < poly.len() - 2 && pick > tri_area(i) {
        pick -= tri_area(i);
        i += 1;
    }
    let (mut a, mut b): (f64, f64) = (rng.random(), rng.random());
    if a + b > 1.0 {
        a = 1.0 - a;
        b = 1.0 - b;
    }
    let (e1, e2) = (sub(poly[i], o), sub(poly[i + 1], o));
    [o[0] + a * e1[0] + b * e2[0], o[1] + a * e1[1] + b * e2[1]]
}

/// Draws one interference field around a base station at the window centre.
pub fn sample_interference_field(
    cfg: &NetworkConfig,
    r: f64,
    window: &SimWindow,
    model: InterfererModel,
    seed: SimSeed,
) -> Result<InterferenceField> {
    cfg.validate()?;
    window.validate()?;
    Ok(sample_field(cfg, r, window.half_width, model, &mut chunk_rng(seed, 0)))
}

/// Mean of `B·log₂(1+SIR)` with simulated co-channel interference and no noise.
#[allow(clippy::too_many_arguments)]
pub fn mc_capacity_il(
    cfg: &NetworkConfig,
    b: f64,
    r: f64,
    regime: Option<PowerRegime>,
    window: &SimWindow,
    model: InterfererModel,
    n_samples: u64,
    seed: SimSeed,
) -> Result<McEstimate> {
    cfg.validate()?;
    window.validate()?;
    check_count("mc_capacity_il", n_samples)?;
    let signal = cfg.gamma_fading() * desired_power(cfg, r, regime)? * r.powf(-cfg.alpha);
    let gain = Gamma::new(cfg.m_antennas as f64, 1.0).map_err(|e| Error::domain("mc_capacity_il", e.to_string()))?;
    let chunk = match model {
        InterfererModel::Iid => 1 << 10,
        InterfererModel::Exact => 1 << 6,
    };
    let parts = map_chunks(n_samples, chunk, |k, len| {
        let mut rng = chunk_rng(seed, k);
        let mut m = Moments::default();
        for _ in 0..len {
            let field = sample_field(cfg, r, window.half_width, model, &mut rng);
            let g: f64 = gain.sample(&mut rng);
            let sir = g * signal / field.total(cfg);
            m.push(b * sir.ln_1p() / LN_2);
        }
        m
    });
    Ok(reduce(parts))
}

/// Monte Carlo `E[exp(−s·I)]` for the i.i.d. interferer model.
pub fn mc_laplace_interference(
    cfg: &NetworkConfig,
    s: f64,
    r_guard: f64,
    window: &SimWindow,
    n_samples: u64,
    seed: SimSeed,
) -> Result<McEstimate> {
    cfg.validate()?;
    window.validate()?;
    check_count("mc_laplace_interference", n_samples)?;
    let parts = map_chunks(n_samples, 1 << 10, |k, len| {
        let mut rng = chunk_rng(seed, k);
        let mut m = Moments::default();
        for _ in 0..len {
            let field = sample_field(cfg, r_guard, window.half_width, InterfererModel::Iid, &mut rng);
            m.push((-s * field.total(cfg)).exp());
        }
        m
    });
    Ok(reduce(parts))
}

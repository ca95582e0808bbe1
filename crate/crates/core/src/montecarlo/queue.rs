//! Discrete-event M/D/1 simulation.

use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::{check_count, chunk_rng, map_chunks, Proportion, SimSeed};
use crate::dimension::{worst_case_rate, DimensionSolution, Scenario};
use crate::error::{Error, Result};

fn check_load(func: &'static str, rho: f64, t_s: f64) -> Result<()> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::domain(func, format!("rho must lie in [0, 1), got {rho}")));
    }
    if !(t_s > 0.0 && t_s.is_finite()) {
        return Err(Error::domain(func, format!("t_s must be positive, got {t_s}")));
    }
    Ok(())
}

/// Frames discarded before recording: 10% of the run, at least 10⁴.
pub fn warmup_frames(n_frames: u64) -> u64 {
    n_frames.div_ceil(10).max(10_000)
}

/// Waiting times from one FCFS run, after the warm-up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueueRun {
    pub waits: Vec<f64>,
    pub warmup: u64,
}

/// Lindley step in service-time units: `W ← max(0, W + 1 − A/T_s)`.
#[inline]
fn lindley<R: Rng>(w: f64, inv_rho: f64, rng: &mut R) -> f64 {
    let a: f64 = rng.sample(Exp1);
    (w + 1.0 - a * inv_rho).max(0.0)
}

/// Discrete-event M/D/1 queue with Poisson arrivals of rate `rho/t_s`.
pub fn sim_mdone_queue(rho: f64, t_s: f64, n_frames: u64, seed: SimSeed) -> Result<QueueRun> {
    check_load("sim_mdone_queue", rho, t_s)?;
    check_count("sim_mdone_queue", n_frames)?;
    let warmup = warmup_frames(n_frames);
    if rho == 0.0 {
        return Ok(QueueRun {
            waits: vec![0.0; n_frames as usize],
            warmup,
        });
    }
    let mut rng = chunk_rng(seed, 0);
    let inv_rho = 1.0 / rho;
    let mut w = 0.0;
    for _ in 0..warmup {
        w = lindley(w, inv_rho, &mut rng);
    }
    let waits = (0..n_frames)
        .map(|_| {
            w = lindley(w, inv_rho, &mut rng);
            w * t_s
        })
        .collect();
    Ok(QueueRun { waits, warmup })
}

/// Frames between retained samples: five relaxation times `ρ/(1−√ρ)²`.
pub fn thinning_lag(rho: f64) -> u64 {
    let relax = rho / (1.0 - rho.sqrt()).powi(2);
    (5.0 * relax).ceil().max(1.0) as u64
}

/// Empirical `P(T_w > t)` for each threshold from effectively independent samples.
///
/// Samples are spaced by [`thinning_lag`] frames inside independent
/// replications, so the binomial interval applies.
pub fn mc_wait_ccdf(rho: f64, t_s: f64, thresholds: &[f64], n_samples: u64, seed: SimSeed) -> Result<Vec<Proportion>> {
    check_load("mc_wait_ccdf", rho, t_s)?;
    check_count("mc_wait_ccdf", n_samples)?;
    let scaled: Vec<f64> = thresholds.iter().map(|&t| t / t_s).collect();
    if rho == 0.0 {
        return Ok(scaled
            .iter()
            .map(|&t| Proportion {
                hits: if t < 0.0 { n_samples } else { 0 },
                trials: n_samples,
            })
            .collect());
    }
    let lag = thinning_lag(rho);
    let inv_rho = 1.0 / rho;
    let parts = map_chunks(n_samples, 1 << 12, |k, len| {
        let mut rng = chunk_rng(seed, k);
        let mut hits = vec![0u64; scaled.len()];
        let mut w = 0.0;
        for _ in 0..warmup_frames(len * lag) {
            w = lindley(w, inv_rho, &mut rng);
        }
        for _ in 0..len {
            for _ in 0..lag {
                w = lindley(w, inv_rho, &mut rng);
            }
            for (h, &t) in hits.iter_mut().zip(&scaled) {
                *h += u64::from(w > t);
            }
        }
        hits
    });
    let mut total = vec![0u64; scaled.len()];
    for part in parts {
        for (t, h) in total.iter_mut().zip(part) {
            *t += h;
        }
    }
    Ok(total
        .into_iter()
        .map(|hits| Proportion {
            hits,
            trials: n_samples,
        })
        .collect())
}

/// Simulated deadline-hit probability of the worst-case user of a solution.
///
/// Frames of the tagged cell (area `A*`) arrive as Poisson at rate `λA*` into
/// the server; the uplink time is the deterministic ergodic-rate time at `(B*, r)`.
pub fn sim_end_to_end(sol: &DimensionSolution, s: &Scenario, n_frames: u64, seed: SimSeed) -> Result<Proportion> {
    check_count("sim_end_to_end", n_frames)?;
    let rate = worst_case_rate(sol, &s.network)?;
    let t_ul = s.traffic.payload_bits_at(sol.s_fixed) / rate;
    let t_s = s.inference.work(sol.s_fixed) / sol.h_opt;
    let rho = s.traffic.lambda_rate * sol.a_opt * t_s;
    let slack = s.qos.d_max - t_ul - t_s;
    let miss = mc_wait_ccdf(rho, t_s, &[slack], n_frames, seed)?[0];
    Ok(miss.complement())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn queue_utilization_law() {
        let run = sim_mdone_queue(0.5, 1.0, 400_000, SimSeed::new(2)).unwrap();
        assert_eq!(run.warmup, 40_000);
        let busy = run.waits.iter().filter(|&&w| w > 0.0).count() as f64 / run.waits.len() as f64;
        assert!((busy - 0.5).abs() < 0.01, "{busy}");
        let idle = sim_mdone_queue(0.0, 1.0, 10, SimSeed::new(2)).unwrap();
        assert!(idle.waits.iter().all(|&w| w == 0.0));
        assert!(sim_mdone_queue(1.0, 1.0, 10, SimSeed::new(2)).is_err());
    }

    #[test]
    fn thinned_ccdf_matches_closed_form_at_service_time() {
        let rho: f64 = 0.6;
        let p = mc_wait_ccdf(rho, 2.0, &[2.0], 200_000, SimSeed::new(4)).unwrap()[0];
        let exact = 1.0 - (1.0 - rho) * rho.exp();
        let (lo, hi) = p.wilson(3.29);
        assert!(lo <= exact && exact <= hi, "{lo} {exact} {hi}");
    }
}

#![allow(dead_code)]

use edgedim::capacity::{capacity_il, capacity_nl, NetworkConfig, PowerRegime};
use edgedim::dimension::{compute_constants, Regime, Scenario};
use edgedim::offload::mdone_wait_ccdf;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exhaustive search over a log grid in (B, H), refined around the best cell.
///
/// Feasibility is tested on the original constraints: the waiting-time tail at
/// the leftover budget `D − T_ul(B) − T_s(H)` must not exceed `1 − ω_min`.
pub fn grid_oracle(s: &Scenario, regime: Regime, n: usize, zooms: usize) -> Option<f64> {
    let k = compute_constants(&s.network, &s.traffic, &s.inference, &s.qos, &s.geometry()).unwrap();
    let work = s.inference.work(k.kappa5);
    let payload = s.traffic.payload_bits_at(k.kappa5);
    let lambda = s.traffic.lambda_rate;
    let h_floor = k.kappa4 * work * k.kappa2;
    let p_tail = 1.0 - s.qos.omega_min;
    let eta = match regime {
        Regime::InterferenceLimited => Some(
            capacity_il(&s.network, 1.0, k.kappa3, Some(PowerRegime::Fractional))
                .unwrap()
                .min(capacity_il(&s.network, 1.0, k.kappa3, Some(PowerRegime::Peak)).unwrap()),
        ),
        Regime::NoiseLimited => None,
    };
    let rate = |b: f64| match eta {
        Some(e) => b * e,
        None => nl_rate(&s.network, b, k.kappa3),
    };
    let c = &s.cost;
    let cost = |b: f64, h: f64| {
        c.beta1 * lambda * b + (1.0 - c.beta1) * c.beta2 * s.network.lambda_b * h * c.compute_unit_flops
    };

    let (mut b_lo, mut b_hi) = (1e3f64.ln(), 1e10f64.ln());
    let (mut h_lo, mut h_hi) = (h_floor.ln(), (h_floor * 1e3).ln());
    let mut best: Option<(f64, usize, usize)> = None;
    for pass in 0..=zooms {
        let bs: Vec<f64> = (0..n).map(|i| (b_lo + (b_hi - b_lo) * i as f64 / (n - 1) as f64).exp()).collect();
        let hs: Vec<f64> = (0..n).map(|j| (h_lo + (h_hi - h_lo) * j as f64 / (n - 1) as f64).exp()).collect();
        let t_ul: Vec<f64> = bs.iter().map(|&b| payload / rate(b)).collect();
        best = None;
        for (j, &h) in hs.iter().enumerate() {
            let ts = work / h;
            let rho = lambda * k.kappa4 * work / h;
            if rho > s.qos.rho_max * (1.0 + 1e-12) {
                continue;
            }
            for (i, &b) in bs.iter().enumerate() {
                let slack = s.qos.d_max - t_ul[i] - ts;
                if slack < 0.0 || mdone_wait_ccdf(rho, ts, slack).unwrap() > p_tail {
                    continue;
                }
                let f = cost(b, h);
                if best.is_none_or(|(bf, _, _)| f < bf) {
                    best = Some((f, i, j));
                }
                // larger B at the same H only costs more
                break;
            }
        }
        let (_, i, j) = best?;
        if pass < zooms {
            let (db, dh) = ((b_hi - b_lo) / (n - 1) as f64, (h_hi - h_lo) / (n - 1) as f64);
            let (bc, hc) = (bs[i].ln(), hs[j].ln());
            b_lo = bc - 2.0 * db;
            b_hi = bc + 2.0 * db;
            h_lo = (hc - 2.0 * dh).max(h_floor.ln());
            h_hi = hc + 2.0 * dh;
        }
    }
    best.map(|(f, _, _)| f + s.cost.vartheta * k.kappa4)
}

fn nl_rate(cfg: &NetworkConfig, b: f64, r: f64) -> f64 {
    capacity_nl(cfg, b, r, Some(PowerRegime::Fractional))
        .unwrap()
        .min(capacity_nl(cfg, b, r, Some(PowerRegime::Peak)).unwrap())
}

/// Randomized scenarios around the baseline, drawn from a fixed seed.
pub fn random_scenarios(n: usize, seed: u64) -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut s = Scenario::default();
            s.network.lambda_b = rng.random_range(0.5..4.0);
            s.traffic.lambda_rate = rng.random_range(20.0..300.0);
            s.qos.d_max = rng.random_range(0.2..1.0);
            s.qos.omega_min = rng.random_range(0.7..0.95);
            s.cost.beta1 = rng.random_range(0.2..0.8);
            s
        })
        .collect()
}

//! Simulation oracles for the closed forms.
//!
//! Every estimator splits its work into fixed-size chunks. Chunk `k` draws
//! from a ChaCha stream keyed by `(seed, k)` and tagged with the stream id,
//! and chunk results are merged in index order, so output is bit-identical
//! for any thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

mod channel;
mod queue;
mod spatial;

pub use channel::{
    mc_capacity_il, mc_capacity_nl, mc_laplace_interference, sample_interference_field, InterferenceField, Interferer,
    InterfererModel,
};
pub use queue::{mc_wait_ccdf, sim_end_to_end, sim_mdone_queue, thinning_lag, warmup_frames, QueueRun};
pub use spatial::{
    circumradius, empirical_geometry, ks_distance, polygon_area, sample_ppp, voronoi_cell, EmpiricalGeometry,
};

/// Square observation window `[−w, w]²` with an edge guard for cell statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimWindow {
    /// km.
    pub half_width: f64,
    /// km.
    pub guard_margin: f64,
}

impl SimWindow {
    pub fn new(half_width: f64, guard_margin: f64) -> Result<Self> {
        let w = Self {
            half_width,
            guard_margin,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width.is_finite() && self.guard_margin >= 0.0 && self.half_width > self.guard_margin) {
            return Err(Error::Config(format!(
                "window needs half_width > guard_margin >= 0, got {} and {}",
                self.half_width, self.guard_margin
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSeed {
    pub seed: u64,
    pub stream_id: u64,
}

impl SimSeed {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream_id: 0 }
    }

    pub fn with_stream(self, stream_id: u64) -> Self {
        Self { stream_id, ..self }
    }
}

/// Generator for chunk `chunk` of a run.
pub fn chunk_rng(seed: SimSeed, chunk: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.seed.to_le_bytes());
    key[8..16].copy_from_slice(&chunk.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(seed.stream_id);
    rng
}

/// Splits `n` items into fixed chunks and maps them in parallel, in order.
pub(super) fn map_chunks<R, F>(n: u64, chunk: u64, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64, u64) -> R + Sync + Send,
{
    let jobs: Vec<(u64, u64)> = (0..n.div_ceil(chunk))
        .map(|k| (k, chunk.min(n - k * chunk)))
        .collect();
    par::map(&jobs, |&(k, len)| f(k, len))
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n: u64,
}

impl McEstimate {
    pub fn ci95(&self) -> (f64, f64) {
        (self.mean - Z95 * self.std_err, self.mean + Z95 * self.std_err)
    }
}

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, Default)]
pub(super) struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub(super) fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64) / n as f64,
        }
    }

    fn estimate(self) -> McEstimate {
        let std_err = if self.n > 1 {
            (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt()
        } else {
            f64::NAN
        };
        McEstimate {
            mean: self.mean,
            std_err,
            n: self.n,
        }
    }
}

pub(super) fn reduce(parts: Vec<Moments>) -> McEstimate {
    parts.into_iter().fold(Moments::default(), Moments::merge).estimate()
}

/// Binomial count with a Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proportion {
    pub hits: u64,
    pub trials: u64,
}

impl Proportion {
    pub fn estimate(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    pub fn wilson(&self, z: f64) -> (f64, f64) {
        let n = self.trials as f64;
        let p = self.estimate();
        let z2 = z * z;
        let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
        ((centre - half).max(0.0), (centre + half).min(1.0))
    }

    pub fn ci95(&self) -> (f64, f64) {
        self.wilson(Z95)
    }

    pub fn complement(&self) -> Proportion {
        Proportion {
            hits: self.trials - self.hits,
            trials: self.trials,
        }
    }
}

pub(super) fn check_lambda(func: &'static str, lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(func, format!("intensity must be positive, got {lambda}")));
    }
    Ok(())
}

pub(super) fn check_count(func: &'static str, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain(func, "sample count must be >= 1"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_interval_brackets_estimate() {
        let p = Proportion { hits: 30, trials: 100 };
        let (lo, hi) = p.ci95();
        assert!(lo < 0.3 && 0.3 < hi);
        let z = Proportion { hits: 0, trials: 1000 };
        assert!(z.ci95().0 < 1e-15);
        assert!(z.ci95().1 > 0.0);
    }
}

//! Stochastic-geometry capacity models, M/D/1 latency tails and convex
//! bandwidth/compute dimensioning for multi-cell edge video analytics.

pub mod capacity;
pub mod dimension;
mod error;
pub mod geometry;
pub mod montecarlo;
pub mod offload;
mod par;
pub mod specfun;

pub use error::{Binding, Error, Result};

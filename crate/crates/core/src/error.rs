use std::fmt;

use serde::{Deserialize, Serialize};

pub type Result<T> = std::result::Result<T, Error>;

/// Constraint of the dimensioning problem that made a configuration infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// The deadline cannot cover service and queueing even with unbounded compute.
    Deadline,
    /// The uplink budget left by the deadline needs more bandwidth than the ceiling allows.
    Bandwidth,
    /// The server stability floor cannot be met.
    Stability,
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Binding::Deadline => "deadline",
            Binding::Bandwidth => "bandwidth",
            Binding::Stability => "stability",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("quadrature did not converge: estimate {estimate:e}, error bound {error_bound:e} after {subdivisions} subdivisions")]
    NonConvergence {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    #[error("iteration in {func} did not converge after {iterations} steps")]
    IterationLimit { func: &'static str, iterations: usize },

    #[error("infeasible ({cause}): {detail}")]
    Infeasible { cause: Binding, detail: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn infeasible(cause: Binding, detail: impl Into<String>) -> Self {
        Error::Infeasible {
            cause,
            detail: detail.into(),
        }
    }
}

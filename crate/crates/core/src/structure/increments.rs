use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::Ensemble;
use crate::stats::{mean_se, sample_variance, Estimate};

/// Δx = x(t + T) - x(t), one sample per path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementSet {
    pub t: f64,
    pub lag: f64,
    pub samples: Vec<f64>,
}

impl IncrementSet {
    pub fn mean(&self) -> Estimate {
        mean_se(&self.samples)
    }

    pub fn variance(&self) -> f64 {
        sample_variance(&self.samples)
    }
}

pub fn increments(e: &Ensemble, t: f64, lag: f64) -> Result<IncrementSet> {
    if !(lag > 0.0) {
        return Err(Error::InvalidParameter(format!("lag must be positive, got {lag}")));
    }
    let i0 = e.grid().require(t)?;
    let i1 = e.grid().require(t + lag)?;
    Ok(IncrementSet {
        t,
        lag,
        samples: e.paths().iter().map(|p| p.values()[i1] - p.values()[i0]).collect(),
    })
}

use serde::{Deserialize, Serialize};

use super::increments::increments;
use crate::error::{Error, Result};
use crate::process::Ensemble;
use crate::stats::{ks_two_sample, KsTest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StationarityVerdict {
    StationaryConsistent,
    Nonstationary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationarityResult {
    pub t: f64,
    pub lag: f64,
    pub ks: KsTest,
    pub verdict: StationarityVerdict,
}

/// Two-sample KS test of x(t + T) - x(t) against x(T) - x(t0).
///
/// Stationary increments make the two samples equal in distribution; the
/// verdict is "stationary-consistent" iff the statistic stays below the 5%
/// critical value.
pub fn stationarity_test(e: &Ensemble, t: f64, lag: f64) -> Result<StationarityResult> {
    e.require_paths(2)?;
    let inc = increments(e, t, lag)?;
    let reference_idx = e.grid().index_of(lag).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "grid lacks time T = {lag} needed for the reference sample x(T)"
        ))
    })?;
    let origin = e.origin();
    let reference: Vec<f64> = e.column(reference_idx).iter().map(|x| x - origin).collect();
    let ks = ks_two_sample(&inc.samples, &reference)?;
    let verdict = if ks.statistic < ks.critical_value {
        StationarityVerdict::StationaryConsistent
    } else {
        StationarityVerdict::Nonstationary
    };
    Ok(StationarityResult { t, lag, ks, verdict })
}

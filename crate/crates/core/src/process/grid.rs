use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when matching a requested time against grid points.
const TIME_MATCH_RTOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Uniform,
    Geometric,
}

/// Strictly increasing, non-negative time points shared by every path of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 points, got {}",
                times.len()
            )));
        }
        if let Some(bad) = times.iter().find(|t| !t.is_finite() || **t < 0.0) {
            return Err(Error::InvalidGrid(format!(
                "times must be finite and non-negative, found {bad}"
            )));
        }
        if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(format!(
                "times must be strictly increasing, found {} followed by {}",
                w[0], w[1]
            )));
        }
        Ok(Self { times })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.times[0]
    }

    pub fn end(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Index of the grid point matching `t` up to a relative tolerance.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = TIME_MATCH_RTOL * t.abs().max(1.0);
        let pos = self.times.partition_point(|&x| x < t - tol);
        (pos < self.times.len() && (self.times[pos] - t).abs() <= tol).then_some(pos)
    }

    pub fn require(&self, t: f64) -> Result<usize> {
        self.index_of(t).ok_or(Error::OffGrid(t))
    }

    /// Returns a grid containing every point of `self` and of `extra`.
    ///
    /// Extra points that coincide with an existing point (within the match
    /// tolerance) are dropped.
    pub fn with_points(&self, extra: &[f64]) -> Result<Self> {
        let mut times = self.times.clone();
        for &t in extra {
            if self.index_of(t).is_none() && !times.contains(&t) {
                times.push(t);
            }
        }
        times.sort_by(f64::total_cmp);
        Self::new(times)
    }
}

/// Builds a uniform or geometric grid with `n` points from `t_start` to `t_end`.
///
/// Both endpoints are reproduced exactly.
pub fn make_grid(kind: GridKind, t_start: f64, t_end: f64, n: usize) -> Result<TimeGrid> {
    if !(t_start.is_finite() && t_end.is_finite()) || t_start >= t_end {
        return Err(Error::InvalidGrid(format!(
            "need t_start < t_end, got {t_start} and {t_end}"
        )));
    }
    if t_start < 0.0 {
        return Err(Error::InvalidGrid(format!("t_start must be >= 0, got {t_start}")));
    }
    if n < 2 {
        return Err(Error::InvalidGrid(format!("need n >= 2, got {n}")));
    }
    let last = (n - 1) as f64;
    let mut times: Vec<f64> = match kind {
        GridKind::Uniform => {
            let step = (t_end - t_start) / last;
            (0..n).map(|k| t_start + k as f64 * step).collect()
        }
        GridKind::Geometric => {
            if t_start == 0.0 {
                return Err(Error::InvalidGrid(
                    "geometric grid needs t_start > 0 (ratio undefined at 0)".into(),
                ));
            }
            let log_ratio = (t_end / t_start).ln();
            (0..n)
                .map(|k| {
                    let t = t_start * (log_ratio * k as f64 / last).exp();
                    // snap values that land within rounding of an integer
                    let r = t.round();
                    if (t - r).abs() <= 1e-12 * t.abs().max(1.0) {
                        r
                    } else {
                        t
                    }
                })
                .collect()
        }
    };
    times[0] = t_start;
    times[n - 1] = t_end;
    TimeGrid::new(times)
}

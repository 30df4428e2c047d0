use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("time {0} is not a point of the ensemble grid")]
    OffGrid(f64),

    #[error("drift table does not cover the grid: {0}")]
    DriftCoverage(String),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("covariance factorization failed at pivot {pivot} (t = {time}) after jitter {jitter:e}")]
    Factorization { pivot: usize, time: f64, jitter: f64 },

    #[error("diffusion shape returned {value} at u = {u} (t = {t}, path {path})")]
    NonPositiveDiffusion { path: usize, t: f64, u: f64, value: f64 },

    #[error("intervals overlap: [t1 - lag1, t1] and [t2, t2 + lag2] must be disjoint ({0})")]
    OverlappingIntervals(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("quadrature grid too narrow: spans {span} but needs {needed}")]
    GridCoverage { span: f64, needed: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::drift::DriftSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessKind {
    Fbm,
    #[serde(rename = "markov-exact", alias = "scaling-markov-exact")]
    ScalingMarkovExact,
    #[serde(rename = "markov-sde", alias = "scaling-markov-sde")]
    ScalingMarkovSde,
}

/// The u-dependence D(u) of a scaling diffusion coefficient
/// D(x, t) = t^(2H-1) D(u), u = x t^(-H).
#[derive(Clone)]
pub enum DiffusionShape {
    Constant(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl DiffusionShape {
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        DiffusionShape::Custom(Arc::new(f))
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            DiffusionShape::Constant(d) => *d,
            DiffusionShape::Custom(f) => f(u),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, DiffusionShape::Constant(_))
    }
}

impl fmt::Debug for DiffusionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffusionShape::Constant(d) => f.debug_tuple("Constant").field(d).finish(),
            DiffusionShape::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Parameters of a generatable process.
#[derive(Debug, Clone)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    pub hurst: f64,
    pub c: f64,
    pub diffusion_shape: Option<DiffusionShape>,
    pub drift: Option<DriftSpec>,
    pub x0: f64,
}

impl ProcessSpec {
    pub fn new(kind: ProcessKind, hurst: f64, c: f64) -> Result<Self> {
        let spec = Self {
            kind,
            hurst,
            c,
            diffusion_shape: None,
            drift: None,
            x0: 0.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn fbm(hurst: f64, c: f64) -> Result<Self> {
        Self::new(ProcessKind::Fbm, hurst, c)
    }

    pub fn markov_exact(hurst: f64, c: f64) -> Result<Self> {
        Self::new(ProcessKind::ScalingMarkovExact, hurst, c)
    }

    pub fn markov_sde(hurst: f64, c: f64) -> Result<Self> {
        Self::new(ProcessKind::ScalingMarkovSde, hurst, c)
    }

    pub fn with_diffusion(mut self, shape: DiffusionShape) -> Result<Self> {
        self.diffusion_shape = Some(shape);
        self.validate()?;
        Ok(self)
    }

    pub fn with_drift(mut self, drift: DriftSpec) -> Self {
        self.drift = Some(drift);
        self
    }

    pub fn with_x0(mut self, x0: f64) -> Self {
        self.x0 = x0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hurst > 0.0 && self.hurst < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "hurst must lie in (0, 1), got {}",
                self.hurst
            )));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "c must be positive and finite, got {}",
                self.c
            )));
        }
        if !self.x0.is_finite() {
            return Err(Error::InvalidParameter("x0 must be finite".into()));
        }
        if let Some(DiffusionShape::Constant(d)) = self.diffusion_shape {
            if !(d > 0.0 && d.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "constant diffusion shape must be positive, got {d}"
                )));
            }
        }
        Ok(())
    }

    /// D(u); defaults to the constant 2Hc, for which the Itô variance is exactly c t^(2H).
    pub fn diffusion(&self) -> DiffusionShape {
        self.diffusion_shape
            .clone()
            .unwrap_or(DiffusionShape::Constant(2.0 * self.hurst * self.c))
    }
}

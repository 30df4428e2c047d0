use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::process::Ensemble;
use crate::stats::{mean_se, Estimate};

/// A dynamical variable A(x, t) to be averaged over the ensemble.
#[derive(Clone)]
pub enum Observable {
    /// xⁿ
    Power(i32),
    /// |x|^q
    AbsolutePower(f64),
    Custom {
        name: String,
        eval: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    },
}

impl Observable {
    pub fn custom(name: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Observable::Custom {
            name: name.into(),
            eval: Arc::new(f),
        }
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match self {
            Observable::Power(n) => x.powi(*n),
            Observable::AbsolutePower(q) => x.abs().powf(*q),
            Observable::Custom { eval, .. } => eval(x, t),
        }
    }
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Power(n) => write!(f, "Power({n})"),
            Observable::AbsolutePower(q) => write!(f, "AbsolutePower({q})"),
            Observable::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// ⟨A(t)⟩ over the paths at grid time `t`, with the standard error of the mean.
pub fn ensemble_average(e: &Ensemble, a: &Observable, t: f64) -> Result<Estimate> {
    let xs = e.values_at(t)?;
    let vals: Vec<f64> = xs.iter().map(|&x| a.eval(x, t)).collect();
    if let Some(bad) = vals.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "observable {a:?} is not finite on the ensemble at t = {t} ({bad})"
        )));
    }
    let mut est = mean_se(&vals);
    if vals.len() < 2 {
        est.se = 0.0;
    }
    Ok(est)
}

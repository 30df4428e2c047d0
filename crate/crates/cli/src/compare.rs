//! Side-by-side comparison of two reports.

use hurstlab_core::stats::ks_critical_two_sample;
use hurstlab_core::structure::StationarityVerdict;
use hurstlab_core::Estimate;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::report::Report;

/// Number of combined standard errors below which two Ĥ are indistinguishable.
pub const H_Z_THRESHOLD: f64 = 3.0;
/// Number of standard errors within which a martingale residual counts as zero.
pub const MARTINGALE_Z_THRESHOLD: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MartingaleVerdict {
    MartingaleConsistent,
    NotMartingale,
}

impl MartingaleVerdict {
    pub fn of(residual: &Estimate) -> Self {
        if residual.within(0.0, MARTINGALE_Z_THRESHOLD) {
            Self::MartingaleConsistent
        } else {
            Self::NotMartingale
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstComparison {
    pub a: Estimate,
    pub b: Estimate,
    /// Ĥ_a - Ĥ_b.
    pub difference: f64,
    pub combined_se: f64,
    pub indistinguishable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseComparison {
    /// KS distance between the CDFs of the two mean collapsed curves.
    pub ks_distance: f64,
    pub ks_critical: f64,
    pub matching: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementComparison {
    pub correlation_a: Estimate,
    pub correlation_b: Estimate,
    pub correlation_difference: Estimate,
    pub stationarity_a: StationarityVerdict,
    pub stationarity_b: StationarityVerdict,
    pub stationarity_differs: bool,
    pub martingale_a: Estimate,
    pub martingale_b: Estimate,
    pub martingale_verdict_a: MartingaleVerdict,
    pub martingale_verdict_b: MartingaleVerdict,
    pub martingale_differs: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub process_a: String,
    pub process_b: String,
    pub grid: Vec<f64>,
    pub hurst: Option<HurstComparison>,
    pub collapse: Option<CollapseComparison>,
    pub increments: Option<IncrementComparison>,
}

impl Comparison {
    pub fn to_bytes(&self) -> Vec<u8> {
        crate::json::to_bytes(self).expect("comparisons always serialize")
    }

    /// Plain-text table for the terminal.
    pub fn table(&self) -> String {
        let mut rows = vec![format!("{:<28}{:>22}{:>22}", "", self.process_a, self.process_b)];
        if let Some(h) = &self.hurst {
            rows.push(format!("{:<28}{:>22.4}{:>22.4}", "H estimate", h.a.value, h.b.value));
            rows.push(format!(
                "{:<28}{:>44}",
                "H difference / combined SE",
                format!("{:.4} / {:.4}", h.difference, h.combined_se)
            ));
        }
        if let Some(c) = &self.collapse {
            rows.push(format!(
                "{:<28}{:>44}",
                "collapse KS / critical",
                format!("{:.4} / {:.4}", c.ks_distance, c.ks_critical)
            ));
        }
        if let Some(i) = &self.increments {
            rows.push(format!(
                "{:<28}{:>22.4}{:>22.4}",
                "increment correlation", i.correlation_a.value, i.correlation_b.value
            ));
            rows.push(format!(
                "{:<28}{:>22}{:>22}",
                "stationarity",
                verdict_name(&i.stationarity_a),
                verdict_name(&i.stationarity_b)
            ));
            rows.push(format!(
                "{:<28}{:>22.4}{:>22.4}",
                "martingale residual", i.martingale_a.value, i.martingale_b.value
            ));
        }
        rows.join("\n") + "\n"
    }
}

fn verdict_name<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

fn process_label(r: &Report) -> String {
    match &r.config.input {
        Some(input) => input.path.display().to_string(),
        None => verdict_name(&r.config.process),
    }
}

/// Compares two reports built on the same grid with the same estimation
/// settings.
pub fn compare(a: &Report, b: &Report) -> Result<Comparison> {
    if a.grid != b.grid {
        return Err(CliError::Incompatible(format!(
            "grids differ ({} vs {} points)",
            a.grid.len(),
            b.grid.len()
        )));
    }
    if a.config.analysis != b.config.analysis {
        return Err(CliError::Incompatible("analysis settings differ".into()));
    }
    if a.config.analysis.structure && a.config.probes != b.config.probes {
        return Err(CliError::Incompatible("structure probes differ".into()));
    }

    let hurst = match (&a.hurst_fit, &b.hurst_fit) {
        (Some(fa), Some(fb)) => {
            let combined_se = fa.h_se.hypot(fb.h_se);
            let difference = fa.h_hat - fb.h_hat;
            Some(HurstComparison {
                a: Estimate::new(fa.h_hat, fa.h_se),
                b: Estimate::new(fb.h_hat, fb.h_se),
                difference,
                combined_se,
                indistinguishable: difference.abs() < H_Z_THRESHOLD * combined_se,
            })
        }
        _ => None,
    };

    let collapse = match (&a.collapse, &b.collapse) {
        (Some(ca), Some(cb)) => {
            let ks_distance = ca.collapse.ks_distance(&cb.collapse);
            let ks_critical = ks_critical_two_sample(ca.collapse.n_samples, cb.collapse.n_samples);
            Some(CollapseComparison {
                ks_distance,
                ks_critical,
                matching: ks_distance < ks_critical,
            })
        }
        _ => None,
    };

    let increments = match (&a.structure, &b.structure) {
        (Some(sa), Some(sb)) => {
            let (ca, cb) = (sa.increment_corr.estimate, sb.increment_corr.estimate);
            let (ma, mb) = (sa.martingale.residual, sb.martingale.residual);
            let (va, vb) = (MartingaleVerdict::of(&ma), MartingaleVerdict::of(&mb));
            Some(IncrementComparison {
                correlation_a: ca,
                correlation_b: cb,
                correlation_difference: Estimate::new(ca.value - cb.value, ca.se.hypot(cb.se)),
                stationarity_a: sa.stationarity.verdict,
                stationarity_b: sb.stationarity.verdict,
                stationarity_differs: sa.stationarity.verdict != sb.stationarity.verdict,
                martingale_a: ma,
                martingale_b: mb,
                martingale_verdict_a: va,
                martingale_verdict_b: vb,
                martingale_differs: va != vb,
            })
        }
        _ => None,
    };

    Ok(Comparison {
        process_a: process_label(a),
        process_b: process_label(b),
        grid: a.grid.clone(),
        hurst,
        collapse,
        increments,
    })
}

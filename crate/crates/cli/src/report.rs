//! Report assembled by a pipeline run.

use std::path::Path;

use hurstlab_core::scaling::{CollapseReport, HurstFit, VarianceCurve};
use hurstlab_core::structure::StructureReport;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::json::format_f64;

pub const TOOL_NAME: &str = "hurstlab";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceTable {
    pub times: Vec<f64>,
    pub variances: Vec<f64>,
    pub se: Vec<f64>,
}

impl From<&VarianceCurve> for VarianceTable {
    fn from(v: &VarianceCurve) -> Self {
        Self {
            times: v.times.clone(),
            variances: v.variances.clone(),
            se: (0..v.times.len()).map(|i| v.se(i)).collect(),
        }
    }
}

/// Collapse result plus the checks against the Gaussian reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseSummary {
    pub collapse: CollapseReport,
    /// Mean collapsed curve at u = 0.
    pub peak: f64,
    /// N(0, c) density at u = 0.
    pub reference_peak: f64,
    pub peak_tolerance: f64,
    pub gaussian_ks_distance: f64,
    pub gaussian_ks_critical: f64,
}

impl CollapseSummary {
    pub fn new(collapse: CollapseReport) -> Self {
        let reference_peak = collapse.reference_density(0.0);
        Self {
            peak: collapse.mean_at(0.0),
            peak_tolerance: collapse.binning_tolerance(reference_peak),
            gaussian_ks_distance: collapse.gaussian_ks_distance(),
            gaussian_ks_critical: collapse.ks_critical_gaussian(),
            reference_peak,
            collapse,
        }
    }
}

/// Parameters the analyses assumed: the configured ones for generated data,
/// the fitted ones for imported data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParameters {
    pub hurst: f64,
    pub c: f64,
    pub fitted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config: RunConfig,
    pub grid: Vec<f64>,
    pub n_paths: usize,
    pub model: ModelParameters,
    pub variance_curve: Option<VarianceTable>,
    pub hurst_fit: Option<HurstFit>,
    pub moment_fits: Vec<HurstFit>,
    pub collapse: Option<CollapseSummary>,
    pub structure: Option<StructureReport>,
}

impl Report {
    pub fn to_bytes(&self) -> Vec<u8> {
        crate::json::to_bytes(self).expect("reports always serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_owned(),
            source,
        })
    }

    /// `t,variance,se` rows.
    pub fn variance_csv(&self) -> Option<String> {
        let v = self.variance_curve.as_ref()?;
        let mut out = String::from("t,variance,se\n");
        for i in 0..v.times.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                format_f64(v.times[i]),
                format_f64(v.variances[i]),
                format_f64(v.se[i])
            ));
        }
        Some(out)
    }

    /// `u`, one F̂ column per collapse time, then the mean curve.
    pub fn collapse_csv(&self) -> Option<String> {
        let c = &self.collapse.as_ref()?.collapse;
        let mut out = String::from("u");
        for curve in &c.rescaled_curves {
            out.push_str(&format!(",F_t={}", format_f64(curve.t)));
        }
        out.push_str(",mean\n");
        for (j, u) in c.u_grid.iter().enumerate() {
            out.push_str(&format_f64(*u));
            for curve in &c.rescaled_curves {
                out.push(',');
                out.push_str(&format_f64(curve.values[j]));
            }
            out.push(',');
            out.push_str(&format_f64(c.mean_curve[j]));
            out.push('\n');
        }
        Some(out)
    }

    /// Writes `report.json` and whichever plot-data files apply into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        let io = |path: &Path| {
            let path = path.to_owned();
            move |source| CliError::Io { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        let file = dir.join("report.json");
        std::fs::write(&file, self.to_bytes()).map_err(io(&file))?;
        if let Some(csv) = self.variance_csv() {
            let file = dir.join("variance_curve.csv");
            std::fs::write(&file, csv).map_err(io(&file))?;
        }
        if let Some(csv) = self.collapse_csv() {
            let file = dir.join("collapse.csv");
            std::fs::write(&file, csv).map_err(io(&file))?;
        }
        Ok(())
    }
}

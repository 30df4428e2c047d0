use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Pipeline stage in which a failure occurred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Validate,
    Import,
    Generate,
    Detrend,
    VarianceFit,
    Moments,
    Collapse,
    Structure,
    Compare,
    Write,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Validate => "validate",
            Stage::Import => "import",
            Stage::Generate => "generate",
            Stage::Detrend => "detrend",
            Stage::VarianceFit => "variance-fit",
            Stage::Moments => "moments",
            Stage::Collapse => "collapse",
            Stage::Structure => "structure",
            Stage::Compare => "compare",
            Stage::Write => "write",
        })
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{stage} stage failed: {source}")]
    Core {
        stage: Stage,
        #[source]
        source: hurstlab_core::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: path_id {path_id} has a different time set than path_id {reference}")]
    RaggedPath {
        path: PathBuf,
        path_id: String,
        reference: String,
    },
    #[error("incompatible reports: {0}")]
    Incompatible(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Attaches a pipeline stage to core errors.
pub trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T>;
}

impl<T> AtStage<T> for hurstlab_core::Result<T> {
    fn at(self, stage: Stage) -> Result<T> {
        self.map_err(|source| CliError::Core { stage, source })
    }
}

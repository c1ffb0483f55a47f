use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("row {row}: expected {expected} cells, found {found}")]
    Format {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: cannot parse {value:?} as a number")]
    Parse {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("signal has {len} samples but at least {required} are required")]
    TooShort { len: usize, required: usize },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("degenerate synthetic spec: {0}")]
    DegenerateSpec(String),

    #[error("signal has zero energy")]
    ZeroEnergy,

    #[error("signal is constant")]
    ConstantSignal,

    #[error("model order {order} is too large for {len} samples")]
    Order { order: usize, len: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dim { expected: usize, found: usize },

    #[error("every feature column was dropped as uninformative")]
    EmptySelection,

    #[error("model has no training data")]
    EmptyModel,

    #[error("training labels contain fewer than two classes")]
    DegenerateLabels,

    #[error("SMO did not converge after {iterations} iterations (max KKT violation {max_violation:.3e})")]
    Convergence { iterations: usize, max_violation: f64 },

    #[error("class {class} has {count} samples, fewer than the {folds} folds requested")]
    Stratification {
        class: usize,
        count: usize,
        folds: usize,
    },

    #[error("confusion matrix is empty")]
    EmptyMatrix,

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

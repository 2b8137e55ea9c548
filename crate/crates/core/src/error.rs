use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("moment mismatch at ell = {ell}: paths = {paths}, transform = {transform}")]
    Mismatch {
        ell: usize,
        paths: String,
        transform: String,
    },

    #[error("no sign change bracketing root #{index}; scan trace: {trace}")]
    Bracket { index: usize, trace: String },

    #[error("density construction failed: {0}")]
    Construction(String),

    #[error("log-weight drift {drift:e} exceeds {limit:e}")]
    Drift { drift: f64, limit: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable tag used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Precondition(_) => "precondition",
            Error::Parameter(_) => "parameter",
            Error::ResourceGuard(_) => "resource_guard",
            Error::Domain(_) => "domain",
            Error::Parse(_) => "parse",
            Error::Mismatch { .. } => "mismatch",
            Error::Bracket { .. } => "bracket",
            Error::Construction(_) => "construction",
            Error::Drift { .. } => "drift",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

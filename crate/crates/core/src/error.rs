use thiserror::Error;

#[derive(Debug, Error)]
pub enum WpError {
    #[error("invalid argument: {0}")]
    Domain(String),
    #[error("integral diverges: {0}")]
    Divergent(String),
    #[error("resolvent solve for mode {mode} did not converge (estimated error {residual:e} > {tolerance:e})")]
    NotConverged { mode: i32, residual: f64, tolerance: f64 },
    #[error("input profile is not bounded (non-finite sample at index {index})")]
    Unbounded { index: usize },
    #[error("singular input: {0}")]
    Singular(String),
    #[error("tensor entry {index:?} failed: {source}")]
    Entry {
        index: [u32; 4],
        #[source]
        source: Box<WpError>,
    },
    #[error("tensor entry {0:?} is missing from the cache")]
    MissingEntry([u32; 4]),
    #[error("imaginary residue {residue:e} in entry {index:?}")]
    NonReal { index: [u32; 4], residue: f64 },
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("truncation {have} too small, need {need}")]
    TruncationTooSmall { have: usize, need: usize },
    #[error("eigensolver failed: {0}")]
    Eigen(String),
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("malformed file {path}: {message}")]
    Format { path: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Oracle(#[from] wp_oracle::OracleError),
}

pub type Result<T> = std::result::Result<T, WpError>;

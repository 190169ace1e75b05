use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("singular linear system at row {row}")]
    Singular { row: usize },
    #[error("quadrature did not settle near the kernel singularity (spread {spread:e})")]
    NotConverged { spread: f64 },
}

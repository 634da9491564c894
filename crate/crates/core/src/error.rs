use thiserror::Error;

pub type Result<T> = std::result::Result<T, ZenoError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZenoError {
    #[error("unphysical Bloch vector: |r| = {norm} exceeds 1")]
    UnphysicalBloch { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("operator is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is defective: eigenvectors are linearly dependent")]
    Defective,

    #[error("invalid bath parameter: {0}")]
    InvalidBath(String),

    #[error("invalid measurement direction: {0}")]
    InvalidDirection(String),

    #[error("negative time {0}")]
    NegativeTime(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("integration step rejected at t = {t}: {reason}")]
    StepRejected { t: f64, reason: String },

    #[error("stationary state is not unique (degenerate generator)")]
    NonUniqueSteadyState,

    #[error("maximizer did not converge after {evaluations} evaluations")]
    NoConvergence { evaluations: usize },

    #[error("consistency check failed: {0}")]
    Consistency(String),
}

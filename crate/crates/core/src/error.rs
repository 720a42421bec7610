use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitianInput { deviation: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("clip must lie in (0, 1e-6], got {0:e}")]
    InvalidClip(f64),

    #[error("invalid integration setup: {0}")]
    InvalidIntegration(String),

    #[error(
        "positivity lost during integration at t = {time} (min eigenvalue {min_eigenvalue:.3e})"
    )]
    PositivityLost { time: f64, min_eigenvalue: f64 },

    #[error("trajectory grid too coarse for quadrature: {0}")]
    GridTooCoarse(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid reference basis: {0}")]
    InvalidBasis(String),

    #[error("malformed Lindbladian description: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

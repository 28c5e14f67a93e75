use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A channel description failed validation.
    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    /// A numeric argument is outside its domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("power vector infeasible: {0}")]
    InfeasiblePower(String),

    #[error("time-sharing shares must lie in [0,1] and sum to 1 (got {0:?})")]
    InvalidShares(Vec<f64>),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{users} users exceeds the supported maximum of {max}")]
    TooManyUsers { users: usize, max: usize },

    /// Outer bounds are only valid for a degraded eavesdropper.
    #[error(
        "NON_DEGRADED: outer bounds need equal eavesdropper gains below 1 \
         (gain spread {spread:.6e}, mean gain {mean:.6})"
    )]
    NonDegraded { spread: f64, mean: f64 },

    #[error("operation requires exactly {expected} users, got {found}")]
    UserCount { expected: usize, found: usize },

    #[error("scenario cell ({ix}, {iy}): {source}")]
    Cell {
        ix: usize,
        iy: usize,
        #[source]
        source: Box<Error>,
    },
}

//! Error type shared by all modules.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unsupported ambient dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),

    #[error("resolution {0} must be even and at least 4")]
    BadResolution(usize),

    #[error("length mismatch: expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("values must be strictly positive (min = {0})")]
    NonPositive(f64),

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("ambient dimension mismatch between body and grid")]
    DimensionMismatch,

    #[error("barycenter condition violated: density has odd part of sup-norm {0}")]
    BarycenterViolation(f64),

    #[error("convexity violation: margin {margin:.3e} below {eps:.1e}")]
    ConvexityViolation { margin: f64, eps: f64 },

    #[error("singular linearization: smallest singular value {0:.3e}")]
    SingularLinearization(f64),

    #[error("line search failed after {0} halvings")]
    LineSearchFailed(usize),

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("degenerate body: {0}")]
    DegenerateBody(String),

    #[error("optimization failure: {0}")]
    OptimizationFailure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

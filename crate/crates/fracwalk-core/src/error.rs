use thiserror::Error;

/// Errors surfaced by the numerical kernels and simulators.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A parameter is outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested value grows beyond what an `f64` can represent.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A series could not reach the requested tolerance at working precision.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Adaptive quadrature failed its internal error estimate.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// Numerical Laplace inversion failed its consistency estimate.
    #[error("inversion failure: {0}")]
    Inversion(String),

    /// A series truncation cap was reached before the tail became negligible.
    #[error("truncation failure: {0}")]
    Truncation(String),

    /// An event-count or work cap was exceeded during simulation.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// An argument lies outside the range covered by a path or table.
    #[error("range error: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("eigenvalue iteration did not converge for {size}x{size} matrix (residual {residual:.3e})")]
    NoConvergence { size: usize, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("k = {k} is not a root: smallest singular value {smallest:.3e} vs next {next:.3e}")]
    NotARoot { k: String, smallest: f64, next: f64 },

    #[error("no root-count transition in alpha bracket: {count_lo} roots at {alpha_lo}, {count_hi} roots at {alpha_hi}")]
    NoTransition {
        alpha_lo: f64,
        alpha_hi: f64,
        count_lo: usize,
        count_hi: usize,
    },

    #[error("contour resolution failure: winding number {winding:.4} is not an integer")]
    ContourResolution { winding: f64 },

    #[error("contour passes through a root of the secular determinant near {0}")]
    BoundaryRoot(String),

    #[error("spectral precondition violated: {0}")]
    SpectralPrecondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors shared by every solver in the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Model or configuration parameters violate a documented invariant.
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// An operation was called outside its domain (negative time, x̄ < 0, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The regular-part series hit `max_terms` before the truncation
    /// criterion was satisfied. This signals a pathological configuration
    /// (the series itself converges for every t ≥ 0), so the fix is a
    /// larger term budget, not a different formula.
    #[error(
        "series truncation failed after {max_terms} terms \
         (last term bound {last_bound:.3e}, target {target:.3e})"
    )]
    SeriesNonConvergence {
        max_terms: usize,
        last_bound: f64,
        target: f64,
    },

    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNonConvergence { achieved: f64, requested: f64 },

    /// Node-doubling self-check of the inverse Laplace transform moved the
    /// result by more than the trust limit.
    #[error("laplace inversion accuracy failure: node-doubling shift {shift:.3e} exceeds {limit:.3e}")]
    InversionAccuracy { shift: f64, limit: f64 },

    /// The explicit finite-difference solver produced a non-finite value.
    #[error("pde solver unstable at step {step} (t = {t:.6})")]
    PdeInstability { step: usize, t: f64 },

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code convention used by the CLI:
    /// 2 invalid input, 4 numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_) | Error::InvalidInput(_) | Error::Unsupported(_) => 2,
            Error::SeriesNonConvergence { .. }
            | Error::QuadratureNonConvergence { .. }
            | Error::InversionAccuracy { .. }
            | Error::PdeInstability { .. } => 4,
        }
    }
}

use thiserror::Error;

use crate::eigensolver::EigenResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not symmetric (max |a_ij - a_ji| = {max_asymmetry:e})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("Jacobi iteration did not converge after {} sweeps (off-diagonal norm {:e})", .partial.sweeps_used, .partial.off_norm)]
    NoConvergence { partial: EigenResult },

    #[error("inverse temperature must be non-negative, got {0}")]
    NegativeBeta(f64),

    #[error("beta*max(1,|xi|) = {0} overflows the linear-domain closed forms; use thermo::observables instead")]
    OverflowRange(f64),
}

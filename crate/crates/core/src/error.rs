// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The population of the highest retained Fock level exceeds the tail
    /// tolerance.
    #[error("cutoff {cutoff} too small: tail mass {tail:.3e} exceeds {tol:.1e}")]
    CutoffTooSmall { cutoff: usize, tail: f64, tol: f64 },

    #[error("step size too large: {0}")]
    StepSizeTooLarge(String),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    /// Without gain the entanglement of a loss-only channel never vanishes
    /// at finite time.
    #[error("no finite threshold time: {0}")]
    NoThreshold(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

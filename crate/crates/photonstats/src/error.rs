//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building operators, solving for steady
/// states, propagating in time, or evaluating the closed forms.
#[derive(Debug, Error)]
pub enum Error {
    /// Operator/space shape disagreement.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Invalid physical parameters or sweep/config values.
    #[error("invalid input: {0}")]
    Validation(String),

    /// A dense linear-algebra backend call failed.
    #[error("linear algebra failure: {0}")]
    Linalg(String),

    /// The Liouvillian zero eigenspace is (numerically) more than
    /// one-dimensional, so "the" steady state is not defined.
    #[error("steady state is not unique: {0}")]
    NonUniqueSteadyState(String),

    /// An iterative solver or adaptive integrator failed to reach its
    /// tolerance within the step/iteration budget.
    #[error("convergence failure: {0}")]
    NonConvergence(String),

    /// A quantity that must be real carries a too-large imaginary residue.
    #[error("imaginary residue too large: {0}")]
    ImaginaryResidue(String),

    /// Correlation functions are undefined when the mean photon number
    /// vanishes (0/0 guard).
    #[error("correlation undefined: mean photon number {nbar:.3e} below threshold")]
    UndefinedCorrelation { nbar: f64 },

    /// A closed-form denominator vanished at this parameter point.
    #[error("analytic expression singular: {0}")]
    SingularPoint(String),

    /// File/serialization problems in the CLI layer.
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// Config parse problems in the CLI layer.
    #[error("config error: {0}")]
    Config(String),
}

/// Convenient alias used by every fallible function in the crate.
pub type Result<T> = std::result::Result<T, Error>;

//! Error taxonomy shared by the whole crate.

use crate::odeflow::{FProfile, KappaProfile};

/// Library-wide error type.
///
/// Integration failures carry the partial profile accumulated up to the
/// failure point so that callers can inspect how far the flow got.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Inputs are mutually inconsistent, e.g. a state off its constraint set.
    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    /// The requested integral diverges.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failure: {0}")]
    Quadrature(String),

    /// Root bracketing or refinement failed.
    #[error("root finding failure: {0}")]
    RootFinding(String),

    /// Profile integration stopped abnormally; the samples accepted before
    /// the failure are preserved.
    #[error("profile integration failed at u = {u}: {reason}")]
    FIntegration {
        reason: String,
        u: f64,
        partial: Box<FProfile>,
    },

    /// Level-curvature integration stopped abnormally.
    #[error("curvature integration failed at u = {u}: {reason}")]
    KappaIntegration {
        reason: String,
        u: f64,
        partial: Box<KappaProfile>,
    },

    /// No admissible data to work with.
    #[error("empty admissible range: {0}")]
    EmptyRange(String),

    /// A verdict cannot be decided from the given data.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

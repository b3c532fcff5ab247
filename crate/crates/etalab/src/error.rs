//! Engine-level error conditions. Parse diagnostics live with the job
//! parser; these are the mathematical/bound failures.

use thiserror::Error;

#[derive(Clone, Debug, Error)]
pub enum EngineError {
    /// Some required generator or relation degree exceeds the internal
    /// degree bound; results within the frontier would be vacuous.
    #[error("internal degree bound {bound} exceeded at homological step {step}: {detail}")]
    DegreeBoundExceeded {
        step: usize,
        bound: usize,
        detail: String,
    },

    /// Polynomial fitting verified badly on extra sample points: the window
    /// started before the lengths actually stabilized, or D truncates them.
    #[error("tor lengths not stabilized: {0}")]
    NotStabilized(String),

    /// Not enough stabilized length values to fit and verify.
    #[error("insufficient fitting window ({detail}); try J >= {suggested_j}")]
    InsufficientWindow { detail: String, suggested_j: usize },

    /// Finite-length analysis was requested but the graded support never
    /// confines within the computed region.
    #[error("finite-length hypothesis violated: {0}")]
    HypothesisViolation(String),

    /// The generating function failed to truncate at x-degree c-1 within
    /// the frontier.
    #[error("generating function defect at x-degree {xdeg}: {detail}")]
    XDegreeDefect { xdeg: usize, detail: String },

    /// No rational form for a Hilbert series emerged within the degree
    /// bound.
    #[error("no rational form within degree bound {0}")]
    NotPolynomialWithinBound(usize),

    /// Structural misuse (incompatible presentations, bad twists) detected
    /// at the library boundary.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;

use thiserror::Error;

/// Errors raised by the Lie group primitives and the steppers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("algebra elements are not compatible: {0}")]
    AlgebraMismatch(String),

    #[error("rotation angle too close to pi for a stable logarithm (trace = {trace})")]
    AngleNearPi { trace: f64 },

    #[error("quaternion too close to the antipode of the identity (q0 = {q0})")]
    LogNearAntipode { q0: f64 },

    #[error("resolvent (I - xi/2) is singular")]
    SingularResolvent,

    #[error("action is not compatible with the given point: {0}")]
    ActionMismatch(String),

    #[error("fixed-point iteration diverged at h = {h}: residual {residual:e} after {iterations} iterations")]
    FixedPointDivergence {
        h: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("solution became non-finite at t = {t}")]
    Diverged { t: f64 },

    #[error("points coincide; use the trivialized differential instead")]
    CoincidentPoints,

    #[error("gradient vanishes (norm {norm:e}); two-form undefined")]
    CriticalPoint { norm: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

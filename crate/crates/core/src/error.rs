use thiserror::Error;

pub type Result<T> = std::result::Result<T, EitError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EitError {
    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A physical parameter violates a type invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The evaluation point hits an exact pole of a response function.
    #[error("pole at evaluation point: {0}")]
    Pole(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error(
        "step size underflow at t = {t:e} s (h = {h:e} s); the problem is stiff \
         at this tolerance, reduce the damping-rate × time-step product or use an implicit scheme"
    )]
    StepUnderflow { t: f64, h: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl EitError {
    /// True for errors raised by numerics rather than by bad inputs.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, EitError::Domain(_) | EitError::InvalidParameter(_))
    }
}

use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input object failed validation (non-monotone gauge, bad table, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Argument outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature or root finding did not reach the requested tolerance.
    #[error("numerical method failed: {0}")]
    Numerical(String),

    /// Counterexample construction could not proceed at the given level.
    #[error("construction failed at level {level}: {reason}")]
    Construction { level: usize, reason: String },

    /// Requested depth is beyond what the representation can carry.
    #[error("depth {requested} not feasible, maximal feasible depth is {max_feasible}")]
    Depth {
        requested: usize,
        max_feasible: usize,
    },

    /// Malformed textual specification (gauge, weight, field, map).
    #[error("cannot parse spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },

    /// Operation is not implemented for this kind of input.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidSpec(String),

    #[error("budget exceeded: {what} needs {requested}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        requested: u128,
        budget: u128,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("spectral pairing is not real: imaginary part {imag:e} exceeds {tol:e}")]
    NonReal { imag: f64, tol: f64 },

    #[error("transform evaluation failed at frequency {frequency}: {reason}")]
    Transform { frequency: i64, reason: String },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Budget and overflow failures both mean "the requested size is too large".
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::Overflow(_))
    }
}

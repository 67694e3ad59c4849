use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probability {0} is outside the admissible range {1}")]
    InvalidProbability(f64, &'static str),

    #[error("{what} = {got} exceeds the guard of {limit}")]
    GuardExceeded {
        what: &'static str,
        limit: u64,
        got: u64,
    },

    #[error("no cycle found within {0} moves")]
    BudgetExhausted(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid partition `{0}`: {1}")]
    Parse(String, String),

    #[error("linear system is singular: {0}")]
    Singular(String),
}

impl Error {
    /// True for the guard/budget failures that a caller should surface as a runtime trip
    /// rather than as a usage mistake.
    pub fn is_runtime_guard(&self) -> bool {
        matches!(
            self,
            Error::GuardExceeded { .. } | Error::BudgetExhausted(_) | Error::Singular(_)
        )
    }
}

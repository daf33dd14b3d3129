use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate {omega:?} is out of range for dims {dims:?}")]
    OutOfRange { omega: Vec<usize>, dims: Vec<usize> },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("pair has negative weight {value} at {omega:?}; norm evaluation needs alpha, beta >= 0")]
    NegativeWeight { omega: Vec<usize>, value: f64 },

    #[error("pair has zero size")]
    ZeroSize,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "budget exceeded: {what} needs {needed:.3e} but the budget is {budget:.3e} \
         (best plan cost {best_cost:.3e})"
    )]
    BudgetExceeded {
        what: &'static str,
        needed: f64,
        budget: f64,
        best_cost: f64,
    },

    #[error("classification rejected the pair: {0}")]
    Rejected(String),

    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

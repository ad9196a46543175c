use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for universe of size {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("coloring is not total on the constraint domain (missing vertex {0})")]
    NotTotal(usize),

    #[error("budget exceeded: {what} has size {size}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        size: u128,
        budget: u128,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("condition violated: {0}")]
    ConditionViolated(String),

    #[error("could not decide comparison within {cap} bits of precision")]
    PrecisionExhausted { cap: u32 },

    #[error("internal audit failed: {0}")]
    AuditFailure(String),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

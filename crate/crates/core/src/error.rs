use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("denominator reduces to zero")]
    ZeroDenominator,
    #[error("singular matrix: no pivot in column {column}")]
    SingularMatrix { column: usize },
    #[error("illegal indeterminate {0} for this operation")]
    IllegalIndeterminate(String),
    #[error("prolongation order {given} is below expression order {needed}")]
    OrderTooLow { given: u32, needed: u32 },
    #[error("cross-section is not transversal: rank {rank}, expected {expected}")]
    TransversalityFailure { rank: usize, expected: usize },
    #[error("invalid rule: {0}")]
    RuleShape(String),
    #[error("expression {0} is not invariant")]
    NotInvariant(usize),
    #[error("cross-section does not have minimal order")]
    NotMinimalOrder,
    #[error("recursion depth exceeded in {0}")]
    RecursionDepth(&'static str),
    #[error("order {order} exceeds the configured maximum {max}")]
    OrderLimit { order: u32, max: u32 },
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("unknown name `{name}` at {line}:{col}")]
    UnknownName { name: String, line: usize, col: usize },
}

impl Error {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::ArityMismatch(_) | Error::UnknownName { .. } | Error::RuleShape(_) => 1,
            _ => 2,
        }
    }
}

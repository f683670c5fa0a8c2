use thiserror::Error;

/// Errors raised by the symbolic engine, the numeric routines and the checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("derivative marker `{0}` was not resolved before evaluation")]
    UnresolvedMarker(String),

    #[error("domain error in {op}: argument {value}")]
    Domain { op: &'static str, value: f64 },

    #[error("arity mismatch: expected {expected}, got {actual}")]
    Arity { expected: usize, actual: usize },

    #[error("invalid expression: {0}")]
    InvalidExpr(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("branch mismatch: {0}")]
    BranchMismatch(String),

    #[error("no sign change of the residual in [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("integration failed at t = {time}: {message}")]
    Integration { time: f64, message: String },

    #[error("parametric image is not the graph of a function: points {first:?} and {second:?} share a base point")]
    NotAGraph { first: Vec<f64>, second: Vec<f64> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("at point {point:?}: {source}")]
    AtPoint { point: Vec<f64>, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(op: &'static str, value: f64) -> Self {
        Error::Domain { op, value }
    }

    /// True for evaluation failures caused by leaving a function's real domain.
    pub fn is_domain(&self) -> bool {
        match self {
            Error::Domain { .. } => true,
            Error::AtPoint { source, .. } => source.is_domain(),
            _ => false,
        }
    }

    pub(crate) fn at(self, point: &[f64]) -> Self {
        Error::AtPoint {
            point: point.to_vec(),
            source: Box::new(self),
        }
    }
}

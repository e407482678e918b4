use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("unbound variable x{index} (domain dimension is {dim})")]
    UnboundVariable { index: usize, dim: usize },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension { context: String, expected: usize, found: usize },

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} has no exact rational value at this point")]
    Inexact(&'static str),

    #[error("invariant violated ({name}): {detail}")]
    Invariant { name: String, detail: String },

    #[error("point {point:?} is outside the overlap of chart {from} with chart {to}")]
    OutsideOverlap { from: String, to: String, point: Vec<f64> },

    #[error("no local representative covers {0}")]
    NoRepresentative(String),

    #[error("base mismatch: {0}")]
    BaseMismatch(String),

    #[error("map is not linear in its second argument; witness {witness:?}")]
    NotLinear { witness: Vec<f64> },

    #[error("map is not etale: |det| = {min_det:e} at {point:?}")]
    NotEtale { min_det: f64, point: Vec<f64> },

    #[error("no decrease found after {halvings} step halvings")]
    StepUnderflow { halvings: usize },

    #[error("point {0:?} left every chart")]
    LeftAllCharts(Vec<f64>),

    #[error("bundle {0} is not registered in the system")]
    NotInSystem(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("{file}: {message}")]
    Format { file: String, message: String },
}

impl Error {
    pub(crate) fn dim(context: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::Dimension { context: context.into(), expected, found }
    }

    pub(crate) fn invariant(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Invariant { name: name.into(), detail: detail.into() }
    }
}

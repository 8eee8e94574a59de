use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),
    #[error("edge `{edge}` references undeclared vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("`{left}` and `{right}` are not composable")]
    NotComposable { left: String, right: String },
    #[error("path `{path}` does not end at `{vertex}`")]
    RangeMismatch { path: String, vertex: String },
    #[error("`{0}` is not a cycle")]
    NotACycle(String),
    #[error("`{0}` is not a cycle of this graph")]
    NotACycleOfGraph(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("denominator {0} is not invertible in the field")]
    NonInvertibleDenominator(String),
    #[error("irreducibility over Q is only decided up to degree 8 (got degree {0})")]
    DegreeTooLarge(usize),
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("polynomial `{0}` is not irreducible")]
    NotIrreducible(String),
    #[error("polynomial `{0}` has degree below 2")]
    DegreeTooSmall(String),
    #[error("polynomial `{0}` is not basic (constant term must be -1)")]
    NotBasic(String),
    #[error("`{0}` is not a basic irreducible polynomial")]
    NotBasicIrreducible(String),
    #[error("operands live in different extension fields")]
    MixedExtensions,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("operands belong to different graphs")]
    GraphMismatch,
    #[error("{0} is not a root of the polynomial")]
    NotARoot(String),
    #[error("gauge scale {0} is not invertible")]
    NonInvertibleScale(String),
    #[error("vectors belong to different modules")]
    DescriptorMismatch,
    #[error("cycle `{0}` is not exclusive")]
    NonExclusiveCycle(String),
    #[error("truncation {0} is too small")]
    TruncationTooSmall(usize),
    #[error("invalid field descriptor `{0}`")]
    InvalidField(String),
}

impl Error {
    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

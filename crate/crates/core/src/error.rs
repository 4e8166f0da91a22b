use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomials from different variable universes: {0} and {1}")]
    UniverseMismatch(String, String),
    #[error("states belong to different algebras")]
    AlgebraMismatch,
    #[error("invalid algebra specification: {0}")]
    InvalidSpec(String),
    #[error("index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("state is not homogeneous")]
    NotHomogeneous,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("singular level: 2*lambda + 1 = 0")]
    SingularLevel,
    #[error("representation carries no symmetric invariant form")]
    MissingForm,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("unbounded selection: {0}")]
    Unbounded(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

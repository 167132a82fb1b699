use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomials belong to different variable contexts")]
    ContextMismatch,

    #[error("invalid variable context: {0}")]
    InvalidContext(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),

    #[error("monomial order mismatch: basis uses {basis}, caller uses {caller}")]
    OrderMismatch { basis: String, caller: String },

    #[error("{0}: zero polynomial")]
    ZeroPolynomial(&'static str),

    #[error("degree precondition violated: {0}")]
    Degree(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("projection not well-oriented: {poly} vanishes identically over cell {cell}")]
    NotWellOriented { poly: String, cell: String },

    #[error("precision exhausted while determining the sign of {what}")]
    PrecisionExhausted { what: String },

    #[error("time budget exhausted during {phase}")]
    Timeout { phase: &'static str },

    #[error("search guard exceeded: {0}")]
    Guard(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("polynomial {0} is not tracked by the decomposition")]
    UntrackedPolynomial(String),

    #[error("{0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

use thiserror::Error;

/// Failure modes shared by every layer of the solver.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("division by zero polynomial")]
    ZeroDivisor,
    #[error("leading coefficient is not invertible")]
    NonInvertibleLeading,
    #[error("exact division left a remainder")]
    InexactDivision,
    #[error("zero polynomial has no {0}")]
    ZeroInput(&'static str),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("repeated interpolation node at index {0}")]
    RepeatedNode(usize),
    #[error("series shapes differ: {0}")]
    ShapeMismatch(String),
    #[error("series constant term is not invertible")]
    SeriesNotInvertible,
    #[error("division by zero at gate {0}")]
    DivisionByZero(usize),
    #[error("circuit arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("dense expansion exceeds {0} terms")]
    TooLarge(usize),
    #[error("degree bound {bound} violated by output {output}")]
    DegreeBound { output: usize, bound: u32 },
    #[error("circuit has {0} outputs, expected one")]
    NotSingleOutput(usize),
    #[error("field of size {p} too small, need at least {need}")]
    FieldTooSmall { p: u64, need: u64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unlucky random choice: {0}")]
    Genericity(String),
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Process exit status reported by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. } | Error::NotPrime(_) | Error::Invalid(_) => 2,
            Error::Hypothesis(_) | Error::ZeroInput(_) => 3,
            Error::FieldTooSmall { .. } | Error::Genericity(_) => 4,
            _ => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

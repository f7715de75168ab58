use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Model parameters imply a conditional probability outside [0, 1].
    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    /// The cubic for the genotype table had no admissible root.
    #[error("no admissible root for genotype table (real roots found: {roots:?})")]
    NoAdmissibleRoot { roots: Vec<f64> },

    /// More than one cubic root produced a valid genotype table.
    #[error("ambiguous genotype table: admissible roots {roots:?}")]
    AmbiguousRoot { roots: Vec<f64> },

    /// A test whose table has an empty cell, so some likelihood ratio is undefined.
    #[error("degenerate test: {0}")]
    DegenerateTest(String),

    #[error("usage error: {0}")]
    Usage(String),

    /// ROC/AUC requested with only one class present.
    #[error("AUC undefined: {0}")]
    UndefinedAuc(String),

    #[error("perfect separation: coefficient {index} diverged to {value}")]
    Separation { index: usize, value: f64 },

    #[error("singular information matrix")]
    Singular,

    #[error("i/o error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

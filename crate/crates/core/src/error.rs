use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a complex: composite of differentials is nonzero in column {column}")]
    NotAComplex { column: usize },

    #[error("enumeration limit: {0}")]
    EnumerationLimit(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("not a representation: {0}")]
    NotARepresentation(String),

    #[error("invariant search failed: {0}")]
    InvariantSearch(String),

    #[error("not a regular sequence: {0}")]
    NotRegular(String),

    #[error("not an exterior algebra: {0}")]
    NotExterior(String),

    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("element is not in the pro-p Iwahori subgroup: {0}")]
    NotInIwahori(String),

    #[error("truncation too small: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid rational {text:?}: {reason}")]
    InvalidRational { text: String, reason: String },

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("singular triangular system: leading coefficient is zero")]
    SingularSystem,

    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),

    #[error("missing invariant for key {0}")]
    MissingInvariant(String),

    #[error("duplicate invariant table key {0}")]
    DuplicateInvariant(String),

    #[error("c1 pairing {0} is negative; such classes carry no invariants")]
    NegativeC1(i64),

    #[error("missing divisor data: no sequence for class {0:?}")]
    MissingDivisorData(Vec<i64>),

    #[error("insertions are not allowed when the c1 pairing is zero")]
    InsertionsWithZeroC1,

    #[error("unsupported insertion: {0}")]
    UnsupportedInsertion(String),

    #[error("invalid class: {0}")]
    InvalidClass(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("{field}: {source}")]
    Field { field: String, source: Box<Error> },
}

impl Error {
    /// Attaches a field path to an error raised while validating a document.
    pub fn at(self, field: impl Into<String>) -> Error {
        Error::Field {
            field: field.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

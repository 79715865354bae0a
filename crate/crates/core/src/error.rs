use thiserror::Error;

/// Everything that can go wrong while building or checking algebras.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("table length mismatch for operation `{op}`: expected {expected}, found {found}")]
    TableLength { op: String, expected: usize, found: usize },
    #[error("entry {value} out of range in operation `{op}` (size {size})")]
    OutOfRange { op: String, value: usize, size: usize },
    #[error("duplicate operation name `{0}`")]
    DuplicateOperation(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unknown operation `{0}`")]
    UnknownOperation(String),
    #[error("operation `{op}` has arity {found}, expected {expected}")]
    ArityMismatch { op: String, expected: usize, found: usize },
    #[error("missing binding for variable {0}")]
    MissingVariable(usize),
    #[error("algebra `{0}` has no designated point")]
    NotPointed(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not a congruence: {0}")]
    NotCongruence(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cap exceeded: {what} (limit {limit})")]
    CapExceeded { what: String, limit: u64 },
    #[error("input outside congruence-modular guarantees: {reason} (witness {witness:?})")]
    OutsideGuarantees { reason: String, witness: Vec<usize> },
    #[error("not a group: {0}")]
    NotGroup(String),
    #[error("uniqueness violated: {0}")]
    NotUnique(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn outside(reason: impl Into<String>, witness: Vec<usize>) -> Self {
        Error::OutsideGuarantees { reason: reason.into(), witness }
    }

    pub(crate) fn cap(what: impl Into<String>, limit: u64) -> Self {
        Error::CapExceeded { what: what.into(), limit }
    }
}

use thiserror::Error;

use crate::structures::{StructureKind, Violation};

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown structure kind `{0}`")]
    UnknownKind(String),

    #[error("malformed structure: {0}")]
    Shape(String),

    #[error("invalid {kind}: {violation}")]
    Invalid { kind: StructureKind, violation: Violation },

    #[error("kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: StructureKind, found: StructureKind },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("enumeration bound exceeded: {kind} supports n <= {max}, requested {n}")]
    BoundExceeded { kind: StructureKind, n: usize, max: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A constructed certificate failed its own re-check.
    #[error("certificate verification failed: {0}")]
    Verification(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

use crate::system::System;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Reasons a system, arrangement or graph file is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("expected {expected} characters, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid character {0:?}; only '0' and '1' are allowed")]
    BadChar(char),
    #[error("duplicate member `{0}`")]
    DuplicateMember(String),
    #[error("{0}")]
    Malformed(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("unknown dimension `{0}`")]
    UnknownDim(String),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("operator sequence is nowhere defined: {0}")]
    NowhereDefined(String),

    /// A proven identity failed on a concrete input. Always a bug.
    #[error("theorem violation: {what}")]
    TheoremViolation {
        what: String,
        witness: Option<Box<System>>,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, kind: ParseErrorKind) -> Self {
        Error::Parse { line, kind }
    }

    pub(crate) fn violation(what: impl Into<String>, witness: Option<&System>) -> Self {
        Error::TheoremViolation {
            what: what.into(),
            witness: witness.map(|s| Box::new(s.clone())),
        }
    }
}

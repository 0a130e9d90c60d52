use thiserror::Error;

use crate::credentials::Role;
use crate::proofs::Pi1Failure;
use crate::protocol::TicketFailure;

#[derive(Debug, Error)]
pub enum Error {
    #[error("decode error: {0}")]
    Decode(String),
    #[error("bad magic")]
    BadMagic,
    #[error("unsupported envelope version {0}")]
    UnsupportedVersion(u16),
    #[error("unknown message type {0:#04x}")]
    UnknownMessageType(u8),
    #[error("expected message type {expected:#04x}, found {found:#04x}")]
    WrongMessageType { expected: u8, found: u8 },
    #[error("corrupt log {path} at offset {offset}")]
    CorruptLog { path: String, offset: u64 },
    #[error("storage: {0}")]
    Io(#[from] std::io::Error),

    #[error("unsupported security level {0}")]
    UnsupportedSecurityLevel(u32),
    #[error("zero scalar where a nonzero one is required")]
    ZeroScalar,
    #[error("could not sample an exponent with x + e != 0")]
    DegenerateExponent,

    #[error("credential does not verify against the presented key")]
    InvalidCredential,
    #[error("invalid identifier {0:?}")]
    InvalidIdentifier(String),
    #[error("identifier already registered: {0}")]
    DuplicateId(String),
    #[error("public key already registered under {0}")]
    DuplicateKey(String),
    #[error("no registered {0:?}")]
    MissingRole(Role),
    #[error("{0:?} keys lack a G2 public key")]
    MissingG2Key(Role),

    #[error("invalid service set: {0}")]
    InvalidServiceSet(String),
    #[error("unknown verifier {0}")]
    UnknownVerifier(String),
    #[error("issuing proof rejected: {0:?}")]
    ProofRejected(Pi1Failure),
    #[error("ticket rejected: {0:?}")]
    TicketRejected(TicketFailure),
    #[error("no tag for {0} in ticket")]
    TagNotFound(String),
}

impl Error {
    /// Stable variant name, for exit reports and bindings.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Decode(_) => "Decode",
            Error::BadMagic => "BadMagic",
            Error::UnsupportedVersion(_) => "UnsupportedVersion",
            Error::UnknownMessageType(_) => "UnknownMessageType",
            Error::WrongMessageType { .. } => "WrongMessageType",
            Error::CorruptLog { .. } => "CorruptLog",
            Error::Io(_) => "Io",
            Error::UnsupportedSecurityLevel(_) => "UnsupportedSecurityLevel",
            Error::ZeroScalar => "ZeroScalar",
            Error::DegenerateExponent => "DegenerateExponent",
            Error::InvalidCredential => "InvalidCredential",
            Error::InvalidIdentifier(_) => "InvalidIdentifier",
            Error::DuplicateId(_) => "DuplicateId",
            Error::DuplicateKey(_) => "DuplicateKey",
            Error::MissingRole(_) => "MissingRole",
            Error::MissingG2Key(_) => "MissingG2Key",
            Error::InvalidServiceSet(_) => "InvalidServiceSet",
            Error::UnknownVerifier(_) => "UnknownVerifier",
            Error::ProofRejected(_) => "ProofRejected",
            Error::TicketRejected(_) => "TicketRejected",
            Error::TagNotFound(_) => "TagNotFound",
        }
    }
}

use thiserror::Error;

use crate::network::NetworkViolation;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid rate: {0}")]
    InvalidRate(String),

    #[error("invalid network: {}", join_violations(.0))]
    InvalidNetwork(Vec<NetworkViolation>),

    #[error("source set is empty")]
    EmptySourceSet,

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("{what} has {items} items, exceeding the enumeration cap of {cap}")]
    ConfigurationTooLarge {
        what: &'static str,
        items: String,
        cap: u64,
    },

    #[error("operation requires {expected} decoders, network has {found}")]
    WrongDecoderCount { expected: usize, found: usize },

    #[error("decoder index {index} out of range for {count} decoders")]
    DecoderIndex { index: usize, count: usize },

    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("malformed codeword bits: {0}")]
    MalformedBits(String),

    #[error("no vertex in the shell carries the received color")]
    NoMatchingVertex,

    #[error("format error: {0}")]
    Format(String),

    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join_violations(v: &[NetworkViolation]) -> String {
    v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

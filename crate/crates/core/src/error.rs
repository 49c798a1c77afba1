use std::io;

use crate::model::Scheme;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("frequency table is empty")]
    FrequencyTableEmpty,

    #[error("no pattern has length x frequency above threshold {threshold}")]
    NoPatternSelected { threshold: u64 },

    #[error("no threshold yields at most {target} intervals (smallest reachable: {minimum})")]
    TargetUnreachable { target: usize, minimum: usize },

    #[error("code length {len} exceeds the 64-bit limit")]
    CodeTooLong { len: u32 },

    #[error("code of {len} bits does not fit a 32-bit array slot")]
    CodeTooWide { len: u8 },

    #[error("{scheme} dictionary cannot back a {structure} structure")]
    SchemeMismatch { scheme: Scheme, structure: &'static str },

    #[error("exact oracle handles at most {max} probabilities, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("keys out of order at position {index}")]
    OrderViolation { index: usize },

    #[error("bit string does not parse as dictionary codes (at bit {bit})")]
    MalformedBits { bit: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid dictionary: {0}")]
    InvalidDictionary(String),

    #[error("bad magic, not a dictionary file")]
    BadMagic,

    #[error("unsupported dictionary format version {0}")]
    UnsupportedVersion(u16),

    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },

    #[error("truncated input: {0}")]
    Truncated(&'static str),

    #[error("unknown scheme tag {0}")]
    UnknownScheme(u8),

    #[error("malformed record: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

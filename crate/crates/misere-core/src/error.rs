use thiserror::Error;

/// Errors surfaced by the engine, census, and counting layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An option id handed to `intern` does not name an existing form.
    #[error("invalid game id {0} (arena holds {1} forms)")]
    InvalidHandle(u32, usize),

    /// A request exceeded a hard capacity limit (e.g. census day > 5).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A census file could not be parsed.
    #[error("malformed census file: {0}")]
    Malformed(String),

    /// A census file has an unsupported format version.
    #[error("unsupported census format version: {0}")]
    Version(String),

    /// A census file is truncated or its checksum does not match.
    #[error("census checksum error: {0}")]
    Checksum(String),

    /// Game-notation parse failure, with a byte offset into the input.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A counting query needs census data deeper than what was supplied.
    #[error("insufficient census: need day {needed}, have day {have}")]
    InsufficientCensus { needed: u32, have: u32 },

    /// A symbolic value was too large to realize as an integer.
    #[error("tower too large to evaluate: {0}")]
    TooLarge(String),

    /// An operation was applied to an argument outside its domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

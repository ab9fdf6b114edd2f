use std::path::PathBuf;

/// Errors produced by the primescale library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid construction parameters (e.g. n_max not a multiple of the
    /// top-level block size).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An index or interval bound outside the available data.
    #[error("out of range: {0}")]
    Range(String),

    /// A mathematical domain violation (e.g. li(x) for x <= 1).
    #[error("domain error: {0}")]
    Domain(String),

    /// A pattern value that the requested analysis does not accept.
    #[error("invalid pattern value {value}: {reason}")]
    InvalidPattern { value: u64, reason: String },

    /// Malformed or inconsistent container contents.
    #[error("container format error: {0}")]
    Format(String),

    /// A container written by an incompatible format revision.
    #[error("unsupported container version {0}")]
    UnsupportedVersion(u16),

    /// Filesystem failure, annotated with the offending path.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// An analysis was asked to run against data that has not been built
    /// or loaded.
    #[error("missing data: {0}")]
    MissingData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use std::fmt;
use std::path::PathBuf;

/// Errors raised by the series, fitting, chain and ingest layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A value outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-supplied argument that does not fit the data.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Years missing from a series that must be contiguous or cover a range.
    #[error("gap in {what}: missing {}", Years(.years))]
    Gap { what: String, years: Vec<i32> },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: usize,
        message: String,
    },

    #[error("duplicate year {year} at line {line}")]
    Duplicate { year: i32, line: u64 },

    #[error("no annual observations found{}", .0.as_deref().map(|c| format!(" for {c}")).unwrap_or_default())]
    EmptySeries(Option<String>),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Coarse classification used for process exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Fit(_) => ErrorKind::Fit,
            Error::Config(_) | Error::Argument(_) => ErrorKind::Usage,
            _ => ErrorKind::Data,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Fit,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

struct Years<'a>(&'a [i32]);

impl fmt::Display for Years<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, y) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{y}")?;
        }
        Ok(())
    }
}

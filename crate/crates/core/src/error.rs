use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
///
/// Each variant carries a stable short code (see [`Error::code`]) that the
/// CLI prints and the C ABI maps onto integer return values.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown or duplicate point identifier `{0}`")]
    Name(String),
    #[error("map is not continuous: `{x}` specializes `{y}` but their images do not")]
    Continuity { x: String, y: String },
    #[error("cover member for `{0}` does not contain it")]
    Cover(String),
    #[error("size {size} exceeds the bound {bound} for {what}")]
    Size {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("class containing `{0}` is not invariant under the map")]
    Invariance(String),
    #[error("invalid ordinal: {0}")]
    Ordinal(String),
    #[error("invalid ladder term: {0}")]
    Term(String),
    #[error("ladder term nesting depth {depth} exceeds the cap {cap}")]
    Depth { depth: usize, cap: usize },
    #[error("invalid locator: {0}")]
    Locator(String),
    #[error("no stationary degree reached up to {0}")]
    DegreeCap(String),
    #[error("empty space")]
    Empty,
    #[error("i/o error: {0}")]
    Io(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Name(_) => "E_NAME",
            Error::Continuity { .. } => "E_CONTINUITY",
            Error::Cover(_) => "E_COVER",
            Error::Size { .. } => "E_SIZE",
            Error::Invariance(_) => "E_INVARIANCE",
            Error::Ordinal(_) => "E_ORDINAL",
            Error::Term(_) => "E_TERM",
            Error::Depth { .. } => "E_DEPTH",
            Error::Locator(_) => "E_LOCATOR",
            Error::DegreeCap(_) => "E_DEGREE_CAP",
            Error::Empty => "E_NAME",
            Error::Io(_) => "E_IO",
            Error::Format(_) => "E_FORMAT",
            Error::Usage(_) => "E_USAGE",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

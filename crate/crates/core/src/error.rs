use alloc::string::String;
use core::fmt;

/// Everything that can go wrong inside the core crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two vectors that must share a length did not.
    DimensionMismatch { expected: usize, found: usize },
    /// An operation that needs at least one element received none.
    Empty(&'static str),
    /// A value that must be finite was NaN or infinite.
    NonFinite(&'static str),
    /// A parameter was outside its admissible range.
    InvalidParameter { name: &'static str, reason: String },
    /// An environment name that is not in the catalog.
    UnknownEnvironment(String),
    /// An algorithm name that is not in the roster.
    UnknownAlgorithm(String),
    /// `step` was called on an episode that already reached its horizon.
    EpisodeFinished,
    /// Exact hypervolume is only implemented for two and three objectives.
    UnsupportedObjectiveCount(usize),
    /// A reference front has the same ideal and nadir value in one objective.
    DegenerateFront { objective: usize },
    /// Statistical test input did not satisfy the test's preconditions.
    Statistics(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Empty(what) => write!(f, "{what} must not be empty"),
            Error::NonFinite(what) => write!(f, "{what} contains a non-finite value"),
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::UnknownEnvironment(name) => write!(f, "unknown environment `{name}`"),
            Error::UnknownAlgorithm(name) => write!(f, "unknown algorithm `{name}`"),
            Error::EpisodeFinished => f.write_str("episode already reached its horizon"),
            Error::UnsupportedObjectiveCount(k) => {
                write!(f, "exact hypervolume supports 2 or 3 objectives, got {k}")
            }
            Error::DegenerateFront { objective } => write!(
                f,
                "reference front is degenerate: ideal equals nadir in objective {objective}"
            ),
            Error::Statistics(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

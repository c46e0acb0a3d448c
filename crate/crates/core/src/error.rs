use thiserror::Error;

/// Errors surfaced by the library. Every variant except [`Error::Io`] and
/// [`Error::Format`] signals a violated precondition of some operation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("epsilon not small enough: eps + eta = {eps} + {eta} >= 1/3")]
    EpsilonNotSmallEnough { eps: f64, eta: f64 },

    #[error("degree must be nonzero for this construction")]
    ZeroDegree,

    #[error("degree must be zero, got {0}")]
    NonZeroDegree(i64),

    #[error("grid {grid} too coarse for eps {eps}: need at least {required} nodes per axis")]
    GridTooCoarse { grid: usize, eps: f64, required: usize },

    #[error("resonant search exhausted after {found} of {requested} terms ({reason})")]
    Exhausted {
        found: usize,
        requested: usize,
        reason: String,
    },

    #[error("operation requires a Fourier representation of the periodic part")]
    NotFourier,

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by violated mathematical preconditions rather
    /// than malformed input or I/O failures.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Format(_))
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

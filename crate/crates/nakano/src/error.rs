use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// The variants split into two families that the command-line front end maps
/// to different exit codes: malformed input (`exit 2`) and numerical failure
/// (`exit 3`). See [`Error::is_input_error`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arclength {s} outside [0, {length}]")]
    OutOfRange { s: f64, length: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resolution insufficient: {0}")]
    Resolution(String),

    #[error("not in space: {0}")]
    NotInSpace(String),

    #[error("non-regular submultiplicative function: {0}")]
    NonRegular(String),

    #[error("inconsistent index estimates: {0}")]
    Inconsistent(String),

    #[error("operator not defined: S unbounded ({0})")]
    Unbounded(String),

    #[error("resolution or regularity failure: {0}")]
    Shape(String),

    #[error("non-convergent extrapolation: {0}")]
    Extrapolation(String),

    #[error("cost guard: {0}")]
    CostGuard(String),

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::OutOfRange { .. }
                | Error::InvalidCurve(_)
                | Error::InvalidInput(_)
                | Error::Config { .. }
                | Error::Io(_)
                | Error::CostGuard(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

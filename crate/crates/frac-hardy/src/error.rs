use std::fmt;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of an operation (bad order, bad range,
    /// support exceeding a truncation radius, malformed input).
    Domain(String),
    /// A quadrature or eigensolver failed to reach its tolerance.
    Convergence(String),
    /// A runtime self-check failed: a decay certificate, a recurrence
    /// cross-check against the defining integral, or a tail-constant
    /// validation did not hold.
    Certification(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }

    pub fn certification(msg: impl Into<String>) -> Self {
        Error::Certification(msg.into())
    }

    /// Process exit code used by the CLI: 2 for domain/usage errors,
    /// 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            Error::Convergence(_) | Error::Certification(_) => 3,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Convergence(m) => write!(f, "convergence failure: {m}"),
            Error::Certification(m) => write!(f, "certification failure: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

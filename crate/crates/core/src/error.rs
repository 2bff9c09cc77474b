use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("coherent interaction requested at zero displacement (divergent self-energy)")]
    SingularDisplacement,

    #[error("{what}: {n} atoms exceeds the cap of {cap}")]
    TooManyAtoms { what: &'static str, n: usize, cap: usize },

    #[error("wavevector touches the light cone (|k+g| = k0), decay rate diverges")]
    LightConeContact,

    #[error("no root of {0} in the bracket")]
    NoRoot(&'static str),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("underdetermined fit: {points} points, need at least {needed}")]
    Underdetermined { points: usize, needed: usize },
}

impl Error {
    /// Input validation failures as opposed to numerical breakdowns.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Invalid(_) | Error::TooManyAtoms { .. } | Error::Underdetermined { .. })
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}

use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("root search failed: {0}")]
    Bracket(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        expected,
    }
}

use thiserror::Error;

/// Errors raised by the lineshape library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical argument is outside the domain of the formula it feeds.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical or structural setting cannot produce a meaningful result.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown level `{0}`")]
    UnknownLevel(String),

    /// The adaptive integrator could not advance.
    #[error("integrator failure: {0}")]
    Integrator(String),

    /// A structured input file could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

pub(crate) fn require_non_negative(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be non-negative and finite, got {value}"
        )))
    }
}

use crate::expr::ExprError;
use crate::slp::Violation;

/// Crate-wide error type.
///
/// Errors split into two families: bad input (the caller can fix the
/// problem definition or parameters) and numerical failure (a valid input
/// on which an algorithm broke down). [`Error::is_input`] tells them apart.
#[derive(Clone, Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("problem rejected: {}", join(.0))]
    Validation(Vec<Violation>),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub fn is_input(&self) -> bool {
        !matches!(self, Error::Numerical(_))
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Reclassifies an expression domain error raised after validation
    /// as a numerical failure.
    pub fn from_eval(e: ExprError, context: &str) -> Self {
        Error::Numerical(format!("{context}: {e}"))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

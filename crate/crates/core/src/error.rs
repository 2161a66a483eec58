use crate::netmodel::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid scenario:\n{0}")]
    InvalidScenario(ValidationReport),

    #[error("config error: {0}")]
    Config(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numeric kernel failed to reach its tolerance. `context` names the
    /// kernel and its arguments so the failing point can be reproduced.
    #[error("numeric failure in {context}: {detail}")]
    NumericFailure { context: String, detail: String },

    #[error("empty network: no base station in the simulation window")]
    EmptyNetwork,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn numeric(context: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::NumericFailure {
            context: context.into(),
            detail: detail.into(),
        }
    }

    /// Attach an outer location (e.g. `k=2, z=120.0`) to a numeric failure.
    pub fn with_context(self, outer: impl std::fmt::Display) -> Self {
        match self {
            Error::NumericFailure { context, detail } => Error::NumericFailure {
                context: format!("{outer}: {context}"),
                detail,
            },
            other => other,
        }
    }
}

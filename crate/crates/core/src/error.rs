use std::path::PathBuf;

/// Errors raised by the laboratory.
///
/// Validation failures (bad arguments, refused budgets, unknown ids) are kept
/// apart from runtime failures so the command line can map them onto its
/// exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown distribution `{id}`; valid ids: {}", valid.join(", "))]
    UnknownDistribution { id: String, valid: Vec<String> },

    #[error("{what}: combinatorial budget exceeded ({required} > {budget})")]
    BudgetExceeded {
        what: &'static str,
        required: f64,
        budget: f64,
    },

    #[error("moment E[a^{p} conj(a)^{q}] is not available for `{dist}`")]
    MomentUnavailable { dist: String, p: u32, q: u32 },

    #[error("truncation order {have} too small for |z| = {radius}: tail bound needs K >= {required}")]
    TailBudget {
        radius: f64,
        have: usize,
        required: usize,
    },

    #[error("|z| = {0} is outside the open unit disc")]
    OutsideDisc(f64),

    #[error("{0}")]
    Experiment(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config parse error: {0}")]
    Config(String),
}

impl Error {
    /// Whether the error stems from user input rather than from running an
    /// experiment.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::UnknownDistribution { .. }
                | Error::BudgetExceeded { .. }
                | Error::MomentUnavailable { .. }
                | Error::TailBudget { .. }
                | Error::OutsideDisc(_)
                | Error::Config(_)
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

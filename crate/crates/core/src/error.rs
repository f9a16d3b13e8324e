use thiserror::Error;

/// Errors raised by the certification, recovery and experiment routines.
#[derive(Debug, Error)]
pub enum MascError {
    /// Malformed or inconsistent input (shapes, ranges, non-finite entries).
    #[error("invalid input: {0}")]
    Input(String),

    /// A combinatorial enumeration would exceed its configured cap.
    #[error("{what}: {count} candidates exceeds the cap of {cap}; {hint}")]
    Budget {
        what: &'static str,
        count: String,
        cap: u64,
        hint: &'static str,
    },

    /// A quantity that should be nonzero is numerically indistinguishable from zero.
    #[error("numerical breakdown: {0}")]
    Numerical(String),

    /// An operation was called outside its hypotheses (e.g. missing structure).
    #[error("usage error: {0}")]
    Usage(String),

    /// The equality constraints of a basis pursuit problem cannot be met.
    #[error("linear program infeasible: residual {residual:.3e}")]
    Infeasible { residual: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = MascError> = std::result::Result<T, E>;

impl MascError {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        MascError::Input(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        MascError::Usage(msg.into())
    }
}

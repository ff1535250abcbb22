use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the state algebra, the Fock oracle, the bounds and the
/// estimators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("truncation too small: dim {dim} leaves tail mass {tail:e}")]
    Truncation { dim: usize, tail: f64 },

    #[error("oracle capacity exceeded: {0}")]
    Capacity(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("finite-difference step too small: fidelity deficit {deficit:e}")]
    StepTooSmall { deficit: f64 },

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("estimate at the boundary: observed frequency {frequency}")]
    Boundary { frequency: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("grid point {index}: {source}")]
    Grid {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

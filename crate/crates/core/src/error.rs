use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no coverage-feasible scenario found after {attempts} attempts")]
    FeasibilityExhausted { attempts: u32 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Some objects cannot be covered by any camera that still fits the spectrum.
    #[error("infeasible: {} object(s) cannot be covered within capacity", uncovered.len())]
    Infeasible { uncovered: Vec<usize> },

    #[error("sub-band {sub_band}: requested {requested} RBs but only {available} free")]
    CapacityExceeded {
        sub_band: usize,
        requested: u32,
        available: u32,
    },

    #[error("node budget of {budget} exhausted before any feasible assignment was found")]
    BudgetExhausted { budget: u64 },

    #[error("unknown background flow {0}")]
    UnknownFlow(u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

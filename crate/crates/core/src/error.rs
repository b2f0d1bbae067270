use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element label {label} is outside the ground set 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),

    #[error("invalid {m}-partition: the {m}-subset {subset:?} lies in {count} blocks (expected exactly 1)")]
    InvalidPartition { m: usize, subset: Vec<usize>, count: usize },

    #[error("invalid parameters: {0}")]
    Parameter(String),

    #[error("out of scope: {0}")]
    Scope(String),

    #[error("search budget exhausted after {explored} nodes (limit {limit})")]
    BudgetExceeded { explored: u64, limit: u64 },

    #[error("no cover of the ground set by at most {k} proper flats")]
    NoCover { k: usize },

    #[error("matroid is disconnected; work with its direct-sum components")]
    Disconnected,

    #[error("decomposition has negative coefficients; facet description needs y >= 0")]
    NotGeneric,

    #[error("neither span convention reproduces the matroid polytope")]
    ConventionMismatch {
        span_as_stated: Vec<(Vec<usize>, String)>,
        complement_span: Vec<(Vec<usize>, String)>,
    },
}

impl Error {
    /// Scope and budget failures are distinguished from malformed input
    /// (the CLI maps them to different exit codes).
    pub fn is_scope(&self) -> bool {
        matches!(self, Error::Scope(_) | Error::BudgetExceeded { .. })
    }
}

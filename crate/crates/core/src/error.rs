use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("argument out of range: {0}")]
    Domain(String),

    #[error("truncation orders differ ({left} vs {right})")]
    MixedOrder { left: usize, right: usize },

    #[error("series must have zero constant term for exp")]
    NonzeroConstantTerm,

    #[error("series must have constant term 1 for log")]
    ConstantTermNotOne,

    #[error("term z^{z_degree} x^{x_degree} violates the pole rule 3*deg_z + deg_x >= 0")]
    PoleRule { z_degree: i64, x_degree: usize },

    #[error("window too small: requested order {requested}, exact only up to {available}")]
    Window { requested: usize, available: usize },

    #[error("x-series must have valuation >= {required}, found {found}")]
    Valuation { required: usize, found: usize },

    #[error("graph is not well formed: {0}")]
    InvalidGraph(String),

    #[error("graph has a separating edge; only core graphs are accepted")]
    NotCore,

    #[error("zero diagonal entry at index {0} of triangular system")]
    ZeroDiagonal(usize),

    #[error("resource cap exceeded: {what} ({count} > {cap})")]
    CapExceeded { what: String, count: u64, cap: u64 },

    #[error("cancellation not resolved at {bits} bits")]
    Precision { bits: u32 },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Resource and usage problems map to exit status 2; everything else is a
    /// mathematical failure.
    pub fn is_resource_or_usage(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::Precision { .. } | Error::Usage(_) | Error::Io(_)
        )
    }
}

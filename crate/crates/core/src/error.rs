use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate simplex {0:?}")]
    DuplicateSimplex(Vec<usize>),
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("empty simplex in input")]
    EmptySimplex,
    #[error("dimension {got} out of range {lo}..={hi}")]
    DimensionOutOfRange { got: usize, lo: usize, hi: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("simplex {0:?} is not in the complex")]
    UnknownSimplex(Vec<usize>),
    #[error("simplex id {id} out of range in dimension {dim}")]
    UnknownSimplexId { dim: usize, id: usize },
    #[error("chain is not integral")]
    NotIntegral,
    #[error("chain is unbalanced at {0}")]
    Unbalanced(String),
    #[error("not a manifold: {0}")]
    NonManifold(String),
    #[error("knot not null-homologous or boundary not a torus: {0}")]
    Longitude(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("document error: {0}")]
    Document(String),
    #[error("fixture integrity check failed: {0}")]
    Fixture(String),
    #[error("no L-to-R arc in the strand family")]
    NoArc,
    #[error("branch and bound budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: usize },
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

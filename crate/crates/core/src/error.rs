use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is not simple: {0}")]
    NonSimple(String),
    #[error("graph is not regular: vertex {vertex} has degree {found}, expected {expected}")]
    NotRegular {
        vertex: usize,
        found: usize,
        expected: usize,
    },
    #[error("invalid matching: {0}")]
    InvalidMatching(String),
    #[error("path is not augmenting: {0}")]
    NotAugmenting(String),

    #[error("invalid generator parameters: {0}")]
    InfeasibleParams(String),
    #[error("generator set is not closed under inverses mod {n}: {residue} has no inverse")]
    AsymmetricGenerators { n: usize, residue: usize },
    #[error("pairing model rejected {attempts} attempts")]
    RejectionBudgetExceeded { attempts: usize },

    #[error("graph has {n} vertices, brute force cap is {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("graph is not connected")]
    NotConnected,
    #[error("power iteration did not converge (residual {residual:e} after {iterations} iterations)")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("vertex set does not attain the minimum cut value {min}: boundary {boundary}")]
    NotBestCut { boundary: usize, min: usize },

    #[error("seed vertex {0} is matched")]
    SeedMatched(usize),
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("vertex {vertex} is not tough at level {level}")]
    NotTough { vertex: usize, level: usize },
    #[error("vertex {0} never becomes tough")]
    NeverTough(usize),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("hypothesis cannot be checked: {0}")]
    HypothesisUnchecked(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

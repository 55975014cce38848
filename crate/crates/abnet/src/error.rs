use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or analyzing a network.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown state `{state}` at vertex `{vertex}`")]
    UnknownState { vertex: String, state: String },
    #[error("malformed network: {0}")]
    MalformedNetwork(String),
    #[error("letter counts must be nonnegative: {0}")]
    NegativeCount(String),
    #[error("generators at vertex `{vertex}` do not commute: letters `{a}`, `{b}`")]
    NonCommutingGenerators { vertex: String, a: String, b: String },
    #[error("monoid enumeration exceeded budget of {budget} elements")]
    MonoidBudgetExceeded { budget: usize },
    #[error("monoid action is reducible; operation requires an irreducible action")]
    ReducibleAction,
    #[error("relations do not span a full-rank sublattice")]
    RankDeficient,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("off-diagonal entry at ({row},{col}) is positive")]
    PositiveOffDiagonal { row: usize, col: usize },
    #[error("networks have different alphabets or underlying vertices")]
    AlphabetMismatch,
    #[error("operation requires a unary network (one letter per vertex)")]
    NotUnary,
    #[error("invalid certificate data: {0}")]
    InvalidCertificate(String),
    #[error("invalid builder spec: {0}")]
    InvalidSpec(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("pair ({a}, {b}) is not admissible: a, b and a - b must all be nonzero")]
    Inadmissible { a: String, b: String },

    #[error("support leaves the window (bound {bound}); a bound of at least {required} is needed")]
    OutsideWindow { bound: i64, required: i64 },

    #[error("lattice map is not injective (rank {rank} < {cols})")]
    NonInjective { rank: usize, cols: usize },

    #[error("symbol {0} is not a C_2 symbol (expected i = 1, j = 2)")]
    NotC2Symbol(String),

    #[error("bad generator symbol: {0}")]
    BadSymbol(String),

    #[error("word {word} is not a normal-form word of the presentation: {reason}")]
    PresentationMismatch { word: String, reason: String },

    #[error("{0} must not be the identity")]
    IdentityWord(&'static str),

    #[error("orbit enumeration inconclusive: {0}")]
    Inconclusive(String),

    #[error("support is not closed under conjugation by {0}")]
    SupportNotClosed(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

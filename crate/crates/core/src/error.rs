use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("poset mismatch: {0}")]
    PosetMismatch(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: usize, hi: usize },
    #[error("operation requires a fully forward-oriented poset")]
    NotOrdered,
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("square at point {0} does not commute")]
    NotCommutative(usize),
    #[error("naturality fails on arrow {source_point} -> {target_point}")]
    NotNatural {
        source_point: usize,
        target_point: usize,
    },
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),
    #[error("invalid zigzag: {0}")]
    InvalidZigzag(String),
    #[error("ill-formed filtration: {0}")]
    InvalidFiltration(String),
    #[error("module is not interval-decomposable here: {0}")]
    NotDecomposable(String),
    #[error("basis is not coherent: {0}")]
    NotCoherent(String),
    #[error("change of basis precondition violated: {0}")]
    ChangeOfBasis(String),
    #[error("morphism is not a monomorphism")]
    NotMono,
    #[error("morphism is not an epimorphism")]
    NotEpi,
    #[error("morphism is zero")]
    ZeroMorphism,
    #[error("morphism source is not an interval module")]
    NotIntervalSource,
    #[error("morphism target is not an interval module")]
    NotIntervalTarget,
    #[error("matching elimination failed: {0}")]
    MatchingFailed(String),
    #[error("infinite minus infinite in a diagram cost")]
    InfiniteDifference,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

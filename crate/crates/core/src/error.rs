use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("element is not in so(n+1,n): {0}")]
    NotInAlgebra(String),
    #[error("codifferential of a degree-0 chain")]
    DegreeZero,
    #[error("zero chain has no homogeneity")]
    ZeroChain,
    #[error("octonion is not imaginary")]
    NotImaginary,
    #[error("octonion is zero or not isotropic")]
    NotIsotropic,
    #[error("subspace is not isotropic")]
    SubspaceNotIsotropic,
    #[error("expected a subspace of dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("theta(x,y,z) = {0}, expected 1/2")]
    ThetaNotHalf(String),
    #[error("real structure does not square to the identity")]
    RealStructure,
    #[error("degenerate fixture: {0}")]
    Degenerate(String),
    #[error("map {0} is not injective")]
    NotInjective(&'static str),
    #[error("index out of range for n = {n}: {what}")]
    IndexOutOfRange { n: usize, what: String },
    #[error("n = {n} too small: {what}")]
    ModelTooSmall { n: usize, what: String },
    #[error("sigma vanishes at {0}")]
    DegenerateSigma(String),
    #[error("holonomy span did not stabilize by derivative order {0}")]
    NoStabilization(usize),
    #[error("frame is not a pointwise basis: {0}")]
    BadFrame(String),
}

pub type Result<T> = std::result::Result<T, Error>;

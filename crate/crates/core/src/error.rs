use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("polynomials are not coprime: f1(1) = 0")]
    NotCoprime,

    #[error("invalid ring specification: {0}")]
    InvalidRing(String),

    #[error("invalid variety specification: {0}")]
    InvalidVariety(String),

    #[error("entry is not integral over the declared order: {0}")]
    NotIntegral(String),

    #[error("NonCommuting({0},{1}): group parts of generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),

    #[error("NotDominant({0}): group part of generator {0} is not an isogeny")]
    NotDominant(usize),

    #[error("undeclared generic point `{0}`")]
    UndeclaredGenerator(String),

    #[error("subgroup is not stable under the endomorphism order: {0}")]
    NotOrderStable(String),

    #[error("tuples do not span a finite-index subgroup (rank {rank} < {expected})")]
    NotFiniteIndex { rank: usize, expected: usize },

    #[error("torsion of order {order} cannot be reduced modulo {modulus}")]
    IncompatibleTorsion { order: String, modulus: u64 },

    #[error("denominator {denominator} is not invertible modulo {modulus}")]
    NonInvertibleModulus { denominator: String, modulus: u64 },

    #[error("modulus must be at least 2 (got {0})")]
    BadModulus(u64),

    #[error("normalization not applied: generator {0} still has a root-of-unity eigenvalue other than 1")]
    NormalizationNotApplied(usize),

    #[error("minimalization search exhausted for generator {0}")]
    SearchExhausted(usize),

    #[error("restriction of id - tau to the co-unipotent part is singular")]
    SingularRestriction,

    #[error("endomorphism is not unipotent on the requested subgroup")]
    NonUnipotent,

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("invalid scenario at {path}: {message}")]
    InvalidScenario { path: String, message: String },

    #[error("{0}")]
    Other(String),
}

impl Error {
    pub fn scenario(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidScenario {
            path: path.into(),
            message: message.into(),
        }
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("twist mismatch: O({0}) vs O({1})")]
    TwistMismatch(i64, i64),

    #[error("section of O({twist}) needs {expected} coefficients, got {got}")]
    CoeffCount { twist: i64, expected: usize, got: usize },

    #[error("the zero section has no well-defined zeros")]
    ZeroSection,

    #[error("projective point [0:0] is not a point")]
    DegeneratePoint,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("splitting type {0:?} does not admit semistable Higgs fields")]
    Inadmissible(Vec<i64>),

    #[error("malformed Higgs field: {0}")]
    Malformed(String),

    #[error("automorphism is not invertible")]
    NotInvertible,

    #[error("unstable Higgs field: {0}")]
    Unstable(String),

    #[error("point is not on the variety: y0^2 = {lhs} but rho(z0) = {rhs}")]
    NotOnVariety { lhs: String, rhs: String },

    #[error("gcd(r, d) = gcd({0}, {1}) is not 1")]
    NotCoprime(i64, i64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no oracle entry for component {0}")]
    MissingOracle(String),

    #[error("cost guard: {0}")]
    CostGuard(String),

    #[error("invariant failure: {0}")]
    Invariant(String),

    #[error("cache error: {0}")]
    Cache(String),
}

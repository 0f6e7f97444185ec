use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field order q = {0}")]
    UnsupportedOrder(u32),
    #[error("invalid tower token `{token}`: {reason}")]
    InvalidToken { token: String, reason: String },
    #[error("polynomial is not irreducible: {0}")]
    Reducible(String),
    #[error("cubic x^3 - t2 x^2 - t1 x - t0 with (t0,t1,t2) = {0} does not have a primitive root")]
    NotPrimitive(String),
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("zero vector is not a projective point")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("planes are not pairwise disjoint")]
    NotDisjoint,
    #[error("not a spread: {0}")]
    NotSpread(String),
    #[error("not an order-q-subline: {0}")]
    NotSubline(String),
    #[error("subline meets the line at infinity")]
    MeetsInfinity,
    #[error("geometric consistency check failed: {0}")]
    Inconsistent(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

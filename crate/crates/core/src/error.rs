use thiserror::Error;

/// Failures surfaced by the library; every variant is a distinct diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero is not allowed here")]
    ZeroInput,
    #[error("{0} is not prime")]
    CompositePlace(String),
    #[error("determinant is {0}, expected 1")]
    Determinant(String),
    #[error("surface relator fails: product of commutators is not the identity")]
    Relator,
    #[error("boundary mismatch: {0}")]
    Boundary(String),
    #[error("matrices do not commute")]
    NotCommuting,
    #[error("{0} is not an eigenvalue")]
    NotEigenvalue(String),
    #[error("class is not in I^2 (odd dimension or signed discriminant {0})")]
    NotInI2(String),
    #[error("norm {norm} exceeds the bound 4(g-1) = {bound}")]
    NormTooLarge { norm: usize, bound: usize },
    #[error("genus must be at least {0}")]
    Genus(usize),
    #[error("eigenvalue {0} lies in the exception set")]
    ExceptionalZ(String),
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    #[error("traces satisfy the Markov equation with m = 4")]
    MarkovM4,
    #[error("{0} is not a rational square")]
    NotSquare(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("exponent r must be at least 1")]
    BadExponent,
    #[error("modulus p^r = {0}^{1} does not fit the exact integer range")]
    ModulusTooLarge(u64, u32),
    #[error("{0} is not a unit")]
    NotAUnit(u64),
    #[error("cannot invert zero in an extension field")]
    ZeroInverse,
    #[error("minimal polynomial of degree {0} is not irreducible")]
    ReducibleMinPoly(usize),
    #[error("element has wrong number of coordinates for the extension field")]
    BadCoords,
    #[error("operands live in different rings")]
    MixedRings,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("leading coefficient of divisor is not a unit")]
    NonUnitLeading,
    #[error("gcd of an all-zero family is undefined")]
    AllZero,
    #[error("polynomial is not regular (its mod-p projection is zero)")]
    NotRegular,
    #[error("denominator's lowest-degree coefficient is not a unit")]
    NonUnitDenominator,
    #[error("matrix shape error: {0}")]
    ShapeError(String),
    #[error("matrix is rank deficient")]
    RankDeficient,
    #[error("mod-p projection of the matrix is rank deficient")]
    RankDeficientProjection,
    #[error("matrix has a zero row (row {0})")]
    ZeroRow(usize),
    #[error("product entry is not polynomial")]
    NonPolynomialResult,
    #[error("coefficient has a digit outside {{0,..,p-1}}")]
    CoefficientOutOfA,
    #[error("stacked component projections are rank deficient")]
    DirectSumViolation,
    #[error("lifted transvection failed the divisibility check")]
    LiftVerificationFailed,
    #[error("internal verification failed: {0}")]
    InternalCheckFailed(String),
    #[error("transform does not satisfy the required hypotheses: {0}")]
    HypothesisViolation(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("semantic error: {0}")]
    Semantic(String),
}

pub type Result<T> = std::result::Result<T, Error>;

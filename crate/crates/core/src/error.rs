use thiserror::Error;

/// Errors raised by the library. Verdict-valued checks never use this type
/// for a failed verification; they return a report instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range (available through {available})")]
    IndexOutOfRange { index: usize, available: usize },

    #[error("functional is not regular: vanishing norm at index {index}")]
    NotRegular { index: usize },

    #[error("quasi-orthogonality violated: b[k-1, {n}] vanishes")]
    QuasiOrthogonalityViolated { n: usize },

    #[error("euclidean step at degree {degree} dropped more than one degree")]
    DegenerateRemainder { degree: usize },

    #[error("the explicit leading-coefficient formula needs <u,1> = 1")]
    NormalizationMissing,

    #[error("singular triangular system: <v, Q_n^2> vanishes")]
    SingularSystem,

    #[error("similarity transform is not tridiagonal with unit super-diagonal at ({row}, {col})")]
    NotTridiagonal { row: usize, col: usize },

    #[error("recurrence is not positive definite at index {index}")]
    NotPositiveDefinite { index: usize },

    #[error("h'(x) vanishes; the derivative form of the confluent kernel is undefined")]
    DerivativeFormSingular,

    #[error("polynomial vanishes at an interval endpoint")]
    EndpointIsZero,

    #[error("{count} nodes lie outside the support, at most {allowed} allowed")]
    BoundViolated { count: usize, allowed: usize },

    #[error("expected {expected} initial coefficients, got {got}")]
    InvalidInit { expected: usize, got: usize },

    #[error("cannot parse scalar: {0}")]
    Parse(String),

    #[error("eigensolver failed to converge")]
    NoConvergence,

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Quasi-orthogonal polynomials built from a monic orthogonal family, the
//! Geronimus transformation that makes them orthogonal again, and the
//! positive Gaussian-type quadrature rules they produce.
//!
//! Every algorithm is generic over [`Scalar`], implemented for exact
//! [`Rational`] arithmetic and for `f64`.

pub mod error;
pub mod functionals;
pub mod geronimus;
pub mod jacobi;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod quasi;
pub mod recurrence;
pub mod scalar;

pub use error::{Error, Result};
pub use functionals::{
    family_recurrence, moments_from_recurrence, orthogonalize, FamilySpec, MomentFunctional,
};
pub use poly::Poly;
pub use recurrence::{PolyInPBasis, RecurrenceCoefficients};
pub use scalar::{Rational, Scalar};

//! Exact and floating-point tools for algebraic curvature tensors, the
//! 2-stein and block conditions, and a constructive check that the two
//! together force constant sectional curvature.

pub mod conditions;
pub mod error;
pub mod io;
pub mod linalg;
pub mod polynomial;
pub mod proof;
pub mod sampling;
pub mod scalar;
pub mod tensor;
pub mod zoo;

pub use error::{Error, Hypothesis, Result};
pub use scalar::{ComplexScalar, Field, GaussianRational, Rational, RealScalar, Scalar, C64};
pub use tensor::{CurvatureTensor, JacobiOperator, SymmetricBilinear};

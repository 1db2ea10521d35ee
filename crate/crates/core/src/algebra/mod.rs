//! Exact scalars, points, and homogeneous forms in three variables.

mod elim;
mod field;
mod form;
mod gcd;
pub mod linalg;
mod point;
mod univariate;

pub use elim::{
    binary_dehomogenize, binary_gcd, binary_homogenize, binary_roots, common_zeros, resultant_z, BinaryRoots,
    CommonZeros,
};
pub use field::{Field, FieldElement};
pub use form::{form_eval, FormJson, HomogeneousForm, Monomial, TermJson};
pub use gcd::{form_gcd, gcd2};
pub(crate) use point::cross;
pub use point::{Matrix3, PlanePoint, PointLiteral};
pub use univariate::Poly1;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unsupported characteristic {0}: need a prime p >= 7 below 2^32")]
    UnsupportedCharacteristic(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("all coordinates are zero")]
    ZeroPoint,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("not divisible, remainder {remainder}")]
    NonDivisible { remainder: String },
    #[error("division by the zero form")]
    DivisionByZero,
    #[error("all forms are zero")]
    ZeroSystem,
    #[error("the common zero set is positive dimensional")]
    PositiveDimensional,
    #[error("field of order {order} too small, need {needed} distinct elements")]
    FieldTooSmall { needed: u64, order: u64 },
}

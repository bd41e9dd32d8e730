//! Exact dense linear algebra over GF(p) and Q.

mod echelon;
mod field;
mod matrix;

pub use echelon::Echelon;
pub use field::{Field, FieldError, FieldSpec, Pivot, PrimeField, Rationals, DEFAULT_PRIME};
pub use matrix::{Matrix, NoSolution, Rref};

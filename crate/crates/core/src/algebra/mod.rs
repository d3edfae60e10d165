//! Polynomials and exponential sums over C^n.

mod expsum;
mod index;
mod linear;
mod poly;
pub mod scalar;

pub use expsum::{ExpSum, ExpTerm, Normalized, PRUNE_REL};
pub use index::MultiIndex;
pub use linear::LinearForm;
pub use poly::SparsePoly;
pub use scalar::{cplx, powu, ComplexScalar, I, ONE, ZERO};

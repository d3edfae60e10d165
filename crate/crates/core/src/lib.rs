//! Construction and verification of entire solutions to Fermat-type systems
//! of difference and partial differential-difference equations, with
//! solutions represented as exponential sums over C^n.

// `!(x > 0.0)` style checks are used on purpose so NaN is rejected, and
// `is_zero` plays the role of `is_empty` on sums and polynomials.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::len_without_is_empty)]

pub mod algebra;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod families;
pub mod fixtures;
pub mod parser;
pub mod shiftinv;
pub mod systems;

pub use error::{Error, Result};

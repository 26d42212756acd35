//! Exact q-series toolkit for class-number generating functions,
//! Rankin–Cohen brackets, Weil-representation components, signature (1,1)
//! lattice geometry and numeric theta lifts.

#![allow(clippy::result_large_err)]

pub mod arith;
pub mod error;
pub mod forms;
pub mod lattice11;
pub mod lift_numeric;
pub mod modspaces;
pub mod qseries;
pub mod rankin_cohen;
pub mod selftest;
pub mod verifier;
pub mod weilrep;

#[doc(hidden)]
pub mod oracles;
#[cfg(test)]
mod proptests;

pub use error::{Error, Result};
pub use qseries::{int, rat, FracSeries};

/// Exact rational numbers used for every coefficient and exponent.
pub type Rational = num::BigRational;

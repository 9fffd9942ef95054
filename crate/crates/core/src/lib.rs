//! Exact big q-Jacobi polynomials, the q-difference operators they diagonalize,
//! and the N-particle jump processes those operators generate.
//!
//! All algebra runs over exact rationals ([`qalgebra::Scalar`]); floating point
//! only appears in stochastic simulation and semigroup exponentials.

pub mod bigqjacobi;
pub mod cache;
pub mod cli;
pub mod dynamics;
mod error;
pub mod interp;
pub mod linalg;
pub mod macdonald;
pub mod qalgebra;
pub mod report;
pub mod statespace;
pub mod symfunc;

pub use error::{Error, Result};

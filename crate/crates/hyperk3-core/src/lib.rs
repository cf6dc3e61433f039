//! Exact arithmetic for hypergeometric lattices of K3 type.
//!
//! The crate is `no_std` and only needs `alloc`. Every decision is made with
//! arbitrary-precision integers and rationals; floating point appears only in
//! the `approx` helpers used for display.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;

pub mod clusters;
pub mod hyplattice;
pub mod k3class;
pub mod linalg;
pub mod numfield;
pub mod picard;
pub mod polyring;
pub mod search;
pub mod siegel;

pub use error::{Error, Result};
pub use polyring::{AlgebraicReal, IntPoly};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

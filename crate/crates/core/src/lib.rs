//! Soft-predicate root clustering for holomorphic functions.
//!
//! The crate finds isolating discs for the roots of a polynomial, `exp` or
//! `sin` inside a square, using Pellet-type tests evaluated with exact dyadic
//! interval arithmetic and an adaptive-precision soft comparison. Every run
//! is instrumented with the subdivision tree size and the bit precision
//! demanded from the coefficient oracles.

pub mod analysis;
pub mod clusterer;
pub mod error;
pub mod functions;
pub mod instances;
pub mod kernel;
pub mod pellet;
pub mod soft_compare;

pub use error::{Error, Result};

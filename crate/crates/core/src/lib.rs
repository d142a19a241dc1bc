//! Torus-equivariant localization on GKM graphs in K-theory.
//!
//! The crate evaluates fixed-point tree sums for (cotangent) J-functions,
//! checks residue recursions along GKM edges, and compares equivariant-limit
//! growth against predicted asymptotic classes. All arithmetic is exact.

pub mod adelic;
pub mod algebra;
pub mod asymptotics;
pub mod error;
pub mod gkm;
pub mod jfunction;
pub mod localization;
pub mod trees;

pub use error::{Error, Result};

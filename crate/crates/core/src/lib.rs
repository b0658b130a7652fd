//! Exact decision procedures for range-compatible and quasi-range-compatible
//! maps on linear and affine spaces of matrices over small finite fields.

pub mod algebra;
pub mod error;
pub mod gallery;
pub mod io;
pub mod opspace;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};

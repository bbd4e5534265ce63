//! Cubic symmetry algebras of two-dimensional superintegrable systems:
//! deformed-oscillator realizations, algebraic spectra, grid verification,
//! supersymmetric partners and PT-symmetric extensions.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod grid;
pub mod matrix_rep;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod pt;
pub mod quintic;
pub mod solver;
pub mod special;
pub mod structure;
pub mod susy;
pub mod tridiag;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

//! Two interacting two-level dipoles in a common thermal radiation field.
//!
//! Coefficients, master-equation generators (standard, partial-secular and
//! full-secular), propagation, two-time correlations and emission spectra.

pub mod coupling;
pub mod dressed;
pub mod error;
pub mod liouvillian;
pub mod ops;
pub mod regression;
pub mod units;

pub use error::{Error, Result};

//! Automatic sequences, substitutions and their multidimensional analogues.
//!
//! The crate converts between automata reading base-`p` digits and
//! constant-length substitutions, computes exact Perron data and factor
//! frequencies, measures recurrence, and checks definability properties of
//! subsets of `ℕ^d` on finite windows.

pub mod automata;
pub mod definability;
pub mod error;
pub mod factor;
pub mod format;
pub mod nd;
mod graph;
pub mod numeration;
pub mod perron;
pub mod recurrence;
pub mod substitution;
pub mod words;

pub use error::{Error, Result};
pub use num_rational::BigRational;

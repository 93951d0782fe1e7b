//! Exact symbol calculus for pseudodifferential operators on flat spin tori.
//!
//! The crate computes Wodzicki residues and noncommutative integrals of
//! operators built from the Dirac operator `D` on `T^d` and selfadjoint
//! one-forms `A`, entirely in exact arithmetic. On top of that engine it runs
//! value-level checks of the tadpole and heat-coefficient vanishing results,
//! with a floating-point Epstein zeta oracle used only to calibrate the
//! normalization of the noncommutative integral.

pub mod boundary;
pub mod clifford;
pub mod coefficients;
pub mod error;
pub mod ncint;
pub mod par;
pub mod psido;
pub mod report;
pub mod symbols;
pub mod theorems;
pub mod zeta_oracle;

pub use error::{Error, Result};

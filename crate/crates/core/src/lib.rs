//! Optimization over the solution set of max-min fuzzy relational equations.
//!
//! The feasible set of `A ∘ x = b` is a finite union of boxes sharing the upper corner
//! `x̄`. [`fre`] computes that structure, [`aco`] searches it with a two-phase ant
//! colony, [`oracle`] enumerates it exhaustively for small systems, and [`bench`]
//! runs repeated experiments.

pub mod aco;
pub mod bench;
pub mod cli;
pub mod error;
pub mod fre;
pub mod objective;
pub mod oracle;

pub use error::{Error, Result};

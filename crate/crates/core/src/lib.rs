//! Exact tooling for image partition regular matrices.
//!
//! * [`matrix`], [`rational`], [`infinite`]: exact rationals, sparse finite
//!   matrices and lazily generated `ω × ω` matrices;
//! * [`classes`]: first entries, segmented and restricted triangular checks
//!   with certificates;
//! * [`constructors`]: the standard families and combinators;
//! * [`coloring`] and [`search`]: colorings of `[1..N]`, witness search and
//!   exhaustive verification at fixed bounds.

pub mod classes;
pub mod coloring;
pub mod constructors;
pub mod error;
pub mod infinite;
pub mod matrix;
pub mod rational;
pub mod search;

pub use error::IprError;
pub use matrix::{mat_apply, FinMatrix, SparseRow};
pub use rational::Rational;

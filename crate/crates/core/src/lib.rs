//! Geometric resolutions of polynomial systems over finite fields.
//!
//! Systems are given as straight-line programs. The solver intersects one
//! equation at a time, keeping a univariate parametrization of the current
//! equidimensional variety, and rebuilds that parametrization from a single
//! unramified fiber by Newton–Hensel lifting after every step.

pub mod circuit;
pub mod cli;
pub mod error;
pub mod field;
pub mod lifting;
pub mod matrix;
pub mod mpoly;
pub mod poly;
pub mod quotient;
pub mod resolution;
pub mod ring;
pub mod series;
pub mod solver;

pub use error::{Error, Result};
pub use field::{FieldContext, FieldElement, FiniteField, Fp};
pub use mpoly::MPoly;
pub use poly::UPoly;
pub use ring::Ring;

//! Exact computations in path categories of quivers with relations.

pub mod bimodule;
pub mod dsl;
pub mod family;
pub mod field;
pub mod gen;
pub mod matrix;
pub mod module;
pub mod onepoint;
pub mod pathcat;
pub mod qh;
pub mod quiver;
pub mod report;
pub mod text;
pub mod trimat;

pub use field::{Field, Fp, Rational};
pub use matrix::Matrix;
pub use quiver::{Path, Presentation, Quiver, Relation};

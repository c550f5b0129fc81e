//! Computations with basic algebras kQ/I over exact fields: normal-path bases, bimodule
//! radical filtrations, distributivity, the critical-pair trichotomy, the families of
//! non-distributive minimal representation-infinite algebras, glueing, string and band
//! combinatorics, and bounded tree covers.

pub mod algebra;
pub mod biserial;
pub mod covers;
pub mod error;
pub mod families;
pub mod field;
pub mod glueing;
pub mod lattice;
pub mod linalg;
pub mod quiver;
pub mod recognizer;

pub use algebra::{Algebra, Element};
pub use error::Error;
pub use field::{FieldSpec, Scalar};
pub use quiver::{GraphShape, Path, Presentation, Quiver, Relation};

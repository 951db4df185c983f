//! Exact computations with recollements of derived categories of
//! finite-dimensional basic algebras given by quivers with relations.

pub mod algebra;
pub mod exactla;
pub mod fdmod;
pub mod fixtures;
pub mod homology;
pub mod kbproj;
pub mod ladder;
pub mod oracle;
pub mod recollement;
pub mod search;
pub mod tri;

pub use algebra::{AlgebraError, AlgebraFingerprint, BasedAlgebra, QuiverPresentation};
pub use exactla::{Field, Mat, Scalar};
pub use tri::{Cert, TriBool};

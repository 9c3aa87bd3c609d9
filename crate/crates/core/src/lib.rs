//! Counting lifts of closed horocycles on `SL_N(Z)\SL_N(R)/SO_N(R)`.
//!
//! The crate bundles the algebraic bookkeeping of standard parabolic
//! subgroups (partitions, Cartan vectors, cones), matrix decompositions and
//! the height function, closed-form volume constants, exact coset
//! enumeration, quadrature for the `A`-part measure and a classifier for
//! limits of translated horocycle measures.

pub mod acceptance;
pub mod algebra;
pub mod constants;
pub mod decompose;
pub mod dynamics;
pub mod enumerate;
pub mod error;
mod linalg;
pub mod measure;
pub mod oracle;
pub mod special;

pub use algebra::{CartanVector, Cone, Partition};
pub use error::{Error, Result};

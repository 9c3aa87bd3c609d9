//! Partitions of `{1,..,N}` and the diagonal (Cartan) data attached to them:
//! traceless vectors, block splittings, the cones `𝒞_C` and the Haar density
//! factor `ρ`.

mod cartan;
mod partition;

pub use cartan::{
    chamber_constraints, lambda, p_norm, p_norm_squared, rho_density, v0, BlockDiagonalSplit,
    CartanVector, Cone, HalfSpace, TRACE_TOL,
};
pub use partition::Partition;

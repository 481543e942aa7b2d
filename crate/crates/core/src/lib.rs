//! Bound entangled states from unextendible product bases, and the machinery
//! to quantify their entanglement in Hilbert–Schmidt geometry.
//!
//! The crate is built around four pieces:
//!
//! - [`herm`] — dense complex Hermitian operator algebra: inner products,
//!   partial transpose, a Jacobi eigensolver, and Haar-distributed local
//!   state sampling. Everything downstream is expressed in these terms.
//! - [`tiles`] — the five-tile pinwheel family of UPB bound entangled
//!   states: layout enumeration, state construction, structural validation.
//! - [`gilbert`] — iterative Hilbert–Schmidt projection of a reference
//!   state onto the separable set, with trace logging and checkpointing,
//!   plus [`decay`] for extrapolating the distance decay to its limit.
//! - [`witness`] — entanglement witnesses built from the projection output
//!   and from the support-projector construction, compared through their
//!   hyperplane distances.
//!
//! [`harness`] ties the pieces into a reproducible batch pipeline; the
//! `bewitness` binary in the companion crate exposes it on the command line.

pub mod decay;
pub mod error;
pub mod gilbert;
pub mod harness;
pub mod herm;
pub mod tiles;
pub mod witness;

#[cfg(test)]
pub(crate) mod test_support;

pub use error::{Error, Result};
pub use herm::{
    eig_hermitian, hs_distance, hs_inner, partial_transpose, product_projector, traceless_part,
    BipartiteDims, DensityMatrix, HermitianOp, ProductVector,
};
pub use tiles::{build_state, enumerate_layouts, pinwheel, TileLayout, UpbState};

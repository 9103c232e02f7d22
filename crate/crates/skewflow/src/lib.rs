//! Maximum integer skew-symmetric flows.
//!
//! The crate solves the maximum IS-flow problem with four algorithms
//! (plain regular augmentation, shortest augmenting paths, the
//! Anstee-style symmetrization method, and shortest blocking IS-flows),
//! certifies every answer with an odd barrier, and reduces matching-type
//! problems to it.

pub mod blockphase;
pub mod certify;
pub mod compress;
pub mod decompose;
pub mod error;
pub mod gen;
pub mod io;
pub mod reductions;
pub mod regpath;
pub mod solvers;
pub mod ssgraph;
mod unionfind;

pub use error::{Error, Result};
pub use ssgraph::{IsFlow, SkewGraph, SkewSymmetricNetwork, SINK, SOURCE};

//! Block-weighted random graphs from block-stable classes.
//!
//! The crate covers exact enumeration through truncated power series, the
//! decorated block tree bijection, phase solving for the block weight `u`,
//! Boltzmann and size-conditioned samplers, and a Monte Carlo harness for
//! block and degree statistics.

pub mod numeric;
pub mod block_tree;
pub mod classes;
pub mod graph;
pub mod phase;
pub mod sampler;
pub mod series;
pub mod stats;
pub mod verify;

pub use numeric::{BigFloat, Coefficient, NumericDomain, PolyU};
pub use series::{EgfSeries, SeriesError};

/// Size the global worker pool; fails if it was already built.
pub fn set_threads(threads: usize) -> Result<(), rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()
}

//! Boltzmann samplers, size-conditioned block trees and the full `P_{n,u}`
//! pipeline.

mod boltzmann;
mod conditioned;
mod decoration;
mod exact;
mod pipeline;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use boltzmann::{boltzmann_cstar, boltzmann_phi, cstar_value};
pub use conditioned::{bienayme_conditioned, cycle_lemma_rotation, ConditionedSumSampler, RejectionStats, DEFAULT_DRAW_BUDGET};
pub use decoration::{decoration_conditioned, DecorationTable};
pub use exact::ExactSmallLaw;
pub use pipeline::{random_allocation, sample_pnu, PnuSampler};

use crate::block_tree::{BlockTreeError, Decoration, PlaneTree};
use crate::classes::ClassError;
use crate::graph::LabelledGraph;
use crate::phase::PhaseError;

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    BlockTree(#[from] BlockTreeError),
    #[error("argument {name} = {value} outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: String },
    #[error("no leaves possible: mu(0) = 0")]
    NoLeaves,
    #[error("size {0} cannot be reached under this law")]
    Impossible(usize),
    #[error("draw budget of {0} outdegrees exhausted")]
    BudgetExhausted(u64),
    #[error("Boltzmann object exceeded {0} vertices")]
    SizeCapExceeded(usize),
    #[error("{0}")]
    Unsupported(String),
}

/// Seed plus stream index of a ChaCha8 generator.
///
/// Replicate `i` of a run uses stream `i`, so results do not depend on how
/// replicates are spread over threads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RngHandle {
    pub seed: u64,
    pub stream: u64,
}

impl RngHandle {
    pub const ALGORITHM: &'static str = "ChaCha8";

    pub fn new(seed: u64, stream: u64) -> Self {
        RngHandle { seed, stream }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        RngHandle { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }
}

/// Decoration of one vertex: block sizes for abstract classes, blocks for
/// concrete ones.
#[derive(Clone, Debug, PartialEq)]
pub enum DecorationSample {
    Sizes(Vec<usize>),
    Blocks(Decoration),
}

impl DecorationSample {
    pub fn sizes(&self) -> Vec<usize> {
        match self {
            DecorationSample::Sizes(s) => s.clone(),
            DecorationSample::Blocks(d) => d.block_sizes(),
        }
    }

    pub fn block_count(&self) -> usize {
        match self {
            DecorationSample::Sizes(s) => s.len(),
            DecorationSample::Blocks(d) => d.blocks.len(),
        }
    }

    pub fn total(&self) -> usize {
        match self {
            DecorationSample::Sizes(s) => s.iter().sum(),
            DecorationSample::Blocks(d) => d.total_size,
        }
    }

    pub fn largest(&self) -> usize {
        self.sizes().into_iter().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct SampleOutput {
    pub tree: PlaneTree,
    pub decorations: Vec<DecorationSample>,
    pub graph: Option<LabelledGraph>,
    pub u: f64,
    pub n: Option<usize>,
    pub x: Option<f64>,
}

impl SampleOutput {
    pub fn size(&self) -> usize {
        self.tree.len()
    }

    /// All derived block sizes, vertex by vertex in preorder.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.decorations.iter().flat_map(|d| d.sizes()).collect()
    }
}

// Poisson by inversion; means above the cutoff are split into independent parts.
const POISSON_CUTOFF: f64 = 30.0;

pub fn poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> u64 {
    let mut remaining = lambda;
    let mut total = 0;
    while remaining > 0.0 {
        let l = remaining.min(POISSON_CUTOFF);
        remaining -= l;
        let mut p = (-l).exp();
        let mut cdf = p;
        let target: f64 = rng.random();
        let mut k = 0u64;
        while target > cdf {
            k += 1;
            p *= l / k as f64;
            let next = cdf + p;
            if next == cdf {
                break;
            }
            cdf = next;
        }
        total += k;
    }
    total
}

/// Index drawn proportionally to `weights` by a linear scan.
pub(crate) fn draw_linear<R: Rng + ?Sized>(weights: impl Iterator<Item = f64> + Clone, rng: &mut R) -> Option<usize> {
    let total: f64 = weights.clone().sum();
    if !(total > 0.0) {
        return None;
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = None;
    for (i, w) in weights.enumerate() {
        if w > 0.0 {
            last = Some(i);
        }
        acc += w;
        if acc > target {
            return Some(i);
        }
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let h = RngHandle::new(42, 3);
        let a: Vec<u64> = (0..4).map({
            let mut r = h.rng();
            move |_| r.random()
        }).collect();
        let b: Vec<u64> = (0..4).map({
            let mut r = h.rng();
            move |_| r.random()
        }).collect();
        assert_eq!(a, b);
        let mut r = h.with_stream(4).rng();
        assert_ne!(a[0], r.random::<u64>());
    }

    #[test]
    fn poisson_mean_and_variance() {
        let mut rng = RngHandle::new(1, 0).rng();
        for &lambda in &[0.3, 4.0, 75.0] {
            let n = 200_000;
            let xs: Vec<f64> = (0..n).map(|_| poisson(lambda, &mut rng) as f64).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
            let se = (lambda / n as f64).sqrt();
            assert!((mean - lambda).abs() < 5.0 * se, "{lambda}: {mean}");
            assert!((var / lambda - 1.0).abs() < 0.03);
        }
    }
}

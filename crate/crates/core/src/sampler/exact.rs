use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use super::SamplerError;
use crate::classes::BlockClassSpec;
use crate::graph::{block_decompose, enumerate_graphs, LabelledGraph};
use crate::numeric::PolyU;

/// Largest size handled by [`ExactSmallLaw`].
pub const MAX_EXACT_SIZE: usize = 7;

/// All rooted connected members of a concrete class on `n` vertices, with
/// their block counts. Serves as the reference law `P_{n,u}` for small `n`.
#[derive(Clone, Debug)]
pub struct ExactSmallLaw {
    pub n: usize,
    pub graphs: Vec<LabelledGraph>,
    pub block_counts: Vec<usize>,
}

impl ExactSmallLaw {
    pub fn new(class: &BlockClassSpec, n: usize) -> Result<Self, SamplerError> {
        if n == 0 || n > MAX_EXACT_SIZE {
            return Err(SamplerError::OutOfRange { name: "n", value: n as f64, range: format!("1..={MAX_EXACT_SIZE}") });
        }
        class.block_tools()?;
        let mut graphs = Vec::new();
        let mut block_counts = Vec::new();
        let members: Vec<LabelledGraph> = enumerate_graphs(n, |g| g.is_connected() && class.contains_graph(g).unwrap_or(false))
            .map_err(crate::block_tree::BlockTreeError::from)?
            .collect();
        for g in members {
            let b = if n == 1 { 0 } else { block_decompose(&g).expect("connected").blocks.len() };
            for r in 1..=n as u32 {
                graphs.push(g.with_root(r).expect("root in range"));
                block_counts.push(b);
            }
        }
        Ok(ExactSmallLaw { n, graphs, block_counts })
    }

    /// `sum_g u^{b(g)}` over rooted members, i.e. `n! [x^n] C*`.
    pub fn total_weight(&self) -> PolyU {
        let max = self.block_counts.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0i64; max + 1];
        for &b in &self.block_counts {
            counts[b] += 1;
        }
        PolyU::from_integers(&counts)
    }

    /// Probabilities of `graphs` under `P_{n,u}`.
    pub fn probabilities(&self, u: f64) -> Vec<f64> {
        let w: Vec<f64> = self.block_counts.iter().map(|&b| u.powi(b as i32)).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    }

    pub fn index_of(&self, g: &LabelledGraph) -> Option<usize> {
        self.graphs.iter().position(|h| h == g)
    }

    pub fn sampler(&self, u: f64) -> Result<ExactSmallSampler<'_>, SamplerError> {
        let dist = WeightedIndex::new(self.probabilities(u)).map_err(|e| SamplerError::Unsupported(e.to_string()))?;
        Ok(ExactSmallSampler { law: self, dist })
    }
}

/// Inverse-CDF sampler over an [`ExactSmallLaw`].
pub struct ExactSmallSampler<'a> {
    law: &'a ExactSmallLaw,
    dist: WeightedIndex<f64>,
}

impl ExactSmallSampler<'_> {
    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.dist.sample(rng)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> LabelledGraph {
        self.law.graphs[self.sample_index(rng)].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::cacti;

    #[test]
    fn cactus_weights() {
        assert_eq!(ExactSmallLaw::new(&cacti(), 3).unwrap().total_weight(), PolyU::from_integers(&[0, 3, 9]));
        assert_eq!(ExactSmallLaw::new(&cacti(), 1).unwrap().total_weight(), PolyU::from_integers(&[1]));
        assert!(ExactSmallLaw::new(&cacti(), 8).is_err());
    }

    #[test]
    fn small_u_prefers_few_blocks() {
        let law = ExactSmallLaw::new(&cacti(), 4).unwrap();
        let p = law.probabilities(1e-6);
        let mass: f64 = p.iter().zip(&law.block_counts).filter(|(_, &b)| b == 1).map(|(p, _)| p).sum();
        assert!(mass > 0.999);
    }
}

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::boltzmann::finish_graph;
use super::{ConditionedSumSampler, DecorationTable, SampleOutput, SamplerError};
use crate::block_tree::{LabelAllocation, PlaneTree};
use crate::classes::BlockClassSpec;
use crate::phase::{reproduction_law_at, solve_phase, PhaseSolution, ReproductionLaw};

/// Uniform label allocation: a uniform root label and a uniform split of
/// the other labels into sets of sizes given by the outdegrees.
pub fn random_allocation<R: Rng + ?Sized>(tree: &PlaneTree, rng: &mut R) -> LabelAllocation {
    let n = tree.len();
    let mut perm: Vec<u32> = (1..=n as u32).collect();
    perm.shuffle(rng);
    let mut labels = Vec::with_capacity(n);
    let mut at = 1;
    for &d in tree.outdegrees() {
        let mut set = perm[at..at + d as usize].to_vec();
        set.sort_unstable();
        at += d as usize;
        labels.push(set);
    }
    LabelAllocation { root_label: perm[0], labels }
}

/// Sampler of `P_{n,u}`: conditioned block tree, conditioned decorations,
/// uniform labels, and for concrete classes the glued graph.
///
/// All tables are built once; [`PnuSampler::sample`] only reads them.
#[derive(Clone, Debug)]
pub struct PnuSampler {
    class: BlockClassSpec,
    u: f64,
    n: usize,
    solution: PhaseSolution,
    law: Arc<ReproductionLaw>,
    trees: ConditionedSumSampler,
    decorations: DecorationTable,
}

impl PnuSampler {
    pub fn new(class: &BlockClassSpec, u: f64, n: usize) -> Result<Self, SamplerError> {
        let solution = solve_phase(class, u)?;
        let law = Arc::new(reproduction_law_at(class, &solution, n.saturating_sub(1).max(1), None)?);
        Self::with_law(class, solution, law, n)
    }

    /// Reuse a law computed for a larger cap.
    pub fn with_law(class: &BlockClassSpec, solution: PhaseSolution, law: Arc<ReproductionLaw>, n: usize) -> Result<Self, SamplerError> {
        if n == 0 {
            return Err(SamplerError::Impossible(0));
        }
        if law.cap() + 1 < n {
            return Err(SamplerError::OutOfRange { name: "n", value: n as f64, range: format!("1..={}", law.cap() + 1) });
        }
        let trees = ConditionedSumSampler::new(&law, n)?;
        let decorations = DecorationTable::new(class, &law)?;
        Ok(PnuSampler { class: class.clone(), u: solution.u, n, solution, law, trees, decorations })
    }

    pub fn solution(&self) -> &PhaseSolution {
        &self.solution
    }

    pub fn law(&self) -> &ReproductionLaw {
        &self.law
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SampleOutput, SamplerError> {
        let tree = self.trees.sample_tree(rng);
        let decorations = tree.outdegrees().iter().map(|&d| self.decorations.sample(d as usize, rng)).collect::<Result<Vec<_>, _>>()?;
        let graph = finish_graph(&self.class, &tree, &decorations, rng)?;
        Ok(SampleOutput { tree, decorations, graph, u: self.u, n: Some(self.n), x: None })
    }
}

/// One draw from `P_{n,u}`. Builds the tables on every call; use
/// [`PnuSampler`] for repeated draws.
pub fn sample_pnu<R: Rng + ?Sized>(class: &BlockClassSpec, u: f64, n: usize, rng: &mut R) -> Result<SampleOutput, SamplerError> {
    PnuSampler::new(class, u, n)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block_tree::build_block_tree;
    use crate::classes::{cacti, polylog_class, trees};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_vertex() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = sample_pnu(&cacti(), 1.0, 1, &mut rng).unwrap();
        assert_eq!(s.size(), 1);
        assert_eq!(s.graph.unwrap().root(), Some(1));
    }

    #[test]
    fn outputs_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sampler = PnuSampler::new(&cacti(), 0.5, 12).unwrap();
        for _ in 0..200 {
            let s = sampler.sample(&mut rng).unwrap();
            let g = s.graph.as_ref().unwrap();
            assert_eq!(g.size(), 12);
            assert!(cacti().contains_graph(g).unwrap());
            let (t, _) = build_block_tree(g).unwrap();
            assert_eq!(t.tree, s.tree);
            for (v, d) in s.decorations.iter().enumerate() {
                assert_eq!(d.total(), s.tree.outdegrees()[v] as usize);
            }
        }
    }

    #[test]
    fn abstract_class_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let s = sample_pnu(&polylog_class(), 0.2, 2000, &mut rng).unwrap();
        assert!(s.graph.is_none());
        assert_eq!(s.block_sizes().iter().sum::<usize>(), 1999);
        let t = sample_pnu(&trees(), 2.0, 50, &mut rng).unwrap();
        assert!(t.block_sizes().iter().all(|&k| k == 1));
    }

    #[test]
    fn determinism() {
        let sampler = PnuSampler::new(&cacti(), 2.0, 9).unwrap();
        let h = crate::sampler::RngHandle::new(5, 17);
        let a = sampler.sample(&mut h.rng()).unwrap();
        let b = sampler.sample(&mut h.rng()).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.tree, b.tree);
    }
}

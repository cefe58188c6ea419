use rand::seq::index::sample as sample_indices;
use rand::Rng;

use super::{draw_linear, DecorationSample, SamplerError};
use crate::block_tree::{Decoration, DecorationBlock};
use crate::classes::{BlockClassSpec, BlockTools};
use crate::phase::{reproduction_law, ReproductionLaw};

/// Tables for the exact Gibbs-partition sampler of `Set(B')` decorations of
/// a fixed size.
///
/// The block containing the smallest label has size `j` with probability
/// `j a_j f_{d-j} / (d f_d)`, where `a_j = u b'_j y^j / j!` and `f` are the
/// coefficients of `exp(u B'(y z))`. Any `y` gives the same law; the one of
/// the reproduction law is used so that `f_d` is proportional to `mu(d)`.
#[derive(Clone, Debug)]
pub struct DecorationTable {
    a: Vec<f64>,
    mu: Vec<f64>,
    tools: Option<BlockTools>,
}

impl DecorationTable {
    pub fn new(class: &BlockClassSpec, law: &ReproductionLaw) -> Result<Self, SamplerError> {
        let cap = law.cap();
        let beta = class.beta_vec(cap)?;
        let mut a = vec![0.0; cap + 1];
        let mut yk = 1.0;
        for j in 1..=cap {
            yk *= law.y;
            a[j] = law.u * beta[j] * yk;
        }
        let tools = if class.is_abstract { None } else { Some(class.block_tools()?.clone()) };
        Ok(DecorationTable { a, mu: law.probs.clone(), tools })
    }

    pub fn max_size(&self) -> usize {
        self.mu.len() - 1
    }

    /// Block sizes in order of their smallest labels.
    pub fn sample_sizes<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Result<Vec<usize>, SamplerError> {
        if d > self.max_size() {
            return Err(SamplerError::OutOfRange { name: "decoration size", value: d as f64, range: format!("0..={}", self.max_size()) });
        }
        let mut sizes = Vec::new();
        let mut r = d;
        while r > 0 {
            let weights = (1..=r).map(|j| j as f64 * self.a[j] * self.mu[r - j]);
            let j = draw_linear(weights, rng).ok_or(SamplerError::Impossible(r))? + 1;
            sizes.push(j);
            r -= j;
        }
        Ok(sizes)
    }

    /// A decoration of size `d`: sizes for abstract classes, labelled blocks
    /// otherwise.
    pub fn sample<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Result<DecorationSample, SamplerError> {
        let sizes = self.sample_sizes(d, rng)?;
        let Some(tools) = &self.tools else {
            return Ok(DecorationSample::Sizes(sizes));
        };
        let mut remaining: Vec<u32> = (1..=d as u32).collect();
        let mut blocks = Vec::with_capacity(sizes.len());
        for &j in &sizes {
            let first = remaining.remove(0);
            let mut picked: Vec<usize> = sample_indices(rng, remaining.len(), j - 1).into_vec();
            picked.sort_unstable();
            let mut labels = vec![first];
            labels.extend(picked.iter().map(|&i| remaining[i]));
            for &i in picked.iter().rev() {
                remaining.remove(i);
            }
            labels.sort_unstable();
            let shape = tools.sample_derived(j, rng)?;
            blocks.push(DecorationBlock { labels, shape });
        }
        Ok(DecorationSample::Blocks(Decoration::new(blocks)?))
    }
}

/// One decoration of size `d` drawn from the Gibbs partition of `Set(B')`
/// weighted by `u^{#blocks}`.
pub fn decoration_conditioned<R: Rng + ?Sized>(class: &BlockClassSpec, u: f64, d: usize, rng: &mut R) -> Result<DecorationSample, SamplerError> {
    let law = reproduction_law(class, u, d.max(1), None)?;
    DecorationTable::new(class, &law)?.sample(d, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{cacti, polylog_class, trees};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(decoration_conditioned(&trees(), 0.7, 0, &mut rng).unwrap().block_count(), 0);
        assert_eq!(decoration_conditioned(&trees(), 0.7, 3, &mut rng).unwrap().sizes(), vec![1, 1, 1]);
    }

    #[test]
    fn cactus_size_two() {
        // one triangle (weight u) against two edges (weight u^2)
        let u = 1.7;
        let law = reproduction_law(&cacti(), u, 4, None).unwrap();
        let table = DecorationTable::new(&cacti(), &law).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 100_000;
        let single = (0..n).filter(|_| table.sample(2, &mut rng).unwrap().block_count() == 1).count();
        let p = u / (u + u * u);
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((single as f64 - n as f64 * p).abs() < 4.0 * sd);
    }

    #[test]
    fn sizes_sum_to_d() {
        let law = reproduction_law(&polylog_class(), 0.2, 500, None).unwrap();
        let table = DecorationTable::new(&polylog_class(), &law).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [1, 7, 100, 500] {
            assert_eq!(table.sample_sizes(d, &mut rng).unwrap().iter().sum::<usize>(), d);
        }
        assert!(table.sample_sizes(501, &mut rng).is_err());
    }
}

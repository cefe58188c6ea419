use rand::seq::SliceRandom;
use rand::Rng;

use super::{poisson, random_allocation, DecorationSample, SampleOutput, SamplerError};
use crate::block_tree::{rebuild_graph, DecoratedBlockTree, Decoration, DecorationBlock, PlaneTree};
use crate::classes::BlockClassSpec;
use crate::phase::solve_phase;

// Inversion over block sizes stops here and returns the last size visited.
const MAX_BLOCK_SCAN: usize = 50_000_000;

fn draw_block_size<R: Rng + ?Sized>(class: &BlockClassSpec, y: f64, bp: f64, rng: &mut R) -> Result<usize, SamplerError> {
    let target = rng.random::<f64>() * bp;
    let mut acc = 0.0;
    let mut yk = 1.0;
    let mut last = 1;
    for j in 1..=MAX_BLOCK_SCAN {
        yk *= y;
        let b = class.beta(j).ok_or(crate::classes::ClassError::InsufficientWeights { class: class.name.clone(), available: class.max_k(), requested: j })?;
        let w = b * yk;
        if w > 0.0 {
            last = j;
        }
        acc += w;
        if acc > target {
            return Ok(j);
        }
        if yk == 0.0 {
            break;
        }
    }
    Ok(last)
}

/// Boltzmann decoration at parameter `y`: `Poisson(u B'(y))` blocks with
/// independent sizes, labels shuffled uniformly.
pub fn boltzmann_phi<R: Rng + ?Sized>(class: &BlockClassSpec, y: f64, u: f64, rng: &mut R) -> Result<DecorationSample, SamplerError> {
    let rho = class.rho_b();
    if !(y > 0.0 && y <= rho) {
        return Err(SamplerError::OutOfRange { name: "y", value: y, range: format!("(0, {rho}]") });
    }
    let bp = class.bprime(y)?;
    let k = poisson(u * bp, rng);
    let sizes = (0..k).map(|_| draw_block_size(class, y, bp, rng)).collect::<Result<Vec<_>, _>>()?;
    if class.is_abstract {
        return Ok(DecorationSample::Sizes(sizes));
    }
    let tools = class.block_tools()?;
    let total: usize = sizes.iter().sum();
    let mut labels: Vec<u32> = (1..=total as u32).collect();
    labels.shuffle(rng);
    let mut blocks = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for &j in &sizes {
        let mut l = labels[at..at + j].to_vec();
        l.sort_unstable();
        at += j;
        blocks.push(DecorationBlock { labels: l, shape: tools.sample_derived(j, rng)? });
    }
    Ok(DecorationSample::Blocks(Decoration::new(blocks)?))
}

/// `C*(x, u)`: the smallest root of `y = x exp(u B'(y))`, for `0 < x <= rho(u)`.
pub fn cstar_value(class: &BlockClassSpec, x: f64, u: f64) -> Result<f64, SamplerError> {
    let sol = solve_phase(class, u)?;
    if !(x > 0.0 && x <= sol.rho_u * (1.0 + 1e-12)) {
        return Err(SamplerError::OutOfRange { name: "x", value: x, range: format!("(0, {}]", sol.rho_u) });
    }
    if x >= sol.rho_u {
        return Ok(sol.y_u);
    }
    // h(y) = y - x exp(u B'(y)) is concave, negative at 0 and nonnegative at y(u)
    let h = |y: f64| -> Result<f64, SamplerError> { Ok(y - x * (u * class.bprime(y)?).exp()) };
    let (mut lo, mut hi) = (0.0, sol.y_u);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Boltzmann sampler for rooted graphs at `(x, u)`. Vertices are generated
/// in preorder from a counter of pending vertices, so the depth of the tree
/// does not matter. Fails once more than `max_size` vertices are produced.
pub fn boltzmann_cstar<R: Rng + ?Sized>(class: &BlockClassSpec, x: f64, u: f64, max_size: usize, rng: &mut R) -> Result<SampleOutput, SamplerError> {
    let y = cstar_value(class, x, u)?;
    let mut outdegrees = Vec::new();
    let mut decorations = Vec::new();
    let mut pending: usize = 1;
    while pending > 0 {
        if outdegrees.len() >= max_size {
            return Err(SamplerError::SizeCapExceeded(max_size));
        }
        let dec = boltzmann_phi(class, y, u, rng)?;
        let d = dec.total();
        pending = pending - 1 + d;
        outdegrees.push(d as u32);
        decorations.push(dec);
    }
    let tree = PlaneTree::from_outdegrees(outdegrees)?;
    let graph = finish_graph(class, &tree, &decorations, rng)?;
    Ok(SampleOutput { tree, decorations, graph, u, n: None, x: Some(x) })
}

pub(crate) fn finish_graph<R: Rng + ?Sized>(
    class: &BlockClassSpec,
    tree: &PlaneTree,
    decorations: &[DecorationSample],
    rng: &mut R,
) -> Result<Option<crate::graph::LabelledGraph>, SamplerError> {
    if class.is_abstract {
        return Ok(None);
    }
    let decs = decorations
        .iter()
        .map(|d| match d {
            DecorationSample::Blocks(b) => Ok(b.clone()),
            DecorationSample::Sizes(_) => Err(SamplerError::Unsupported("concrete class produced sizes only".into())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let t = DecoratedBlockTree::new(tree.clone(), decs)?;
    let alloc = random_allocation(tree, rng);
    Ok(Some(rebuild_graph(&t, &alloc, None)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{cacti, trees};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trees_decoration_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (u, y) = (0.8, 0.9);
        let n = 100_000;
        let mut total = 0;
        for _ in 0..n {
            let d = boltzmann_phi(&trees(), y, u, &mut rng).unwrap();
            assert!(d.sizes().iter().all(|&s| s == 1));
            total += d.block_count();
        }
        let mean = total as f64 / n as f64;
        assert!((mean - u * y).abs() < 3.0 * (u * y / n as f64).sqrt() + 1e-3);
    }

    #[test]
    fn single_vertex_probability() {
        // P(size 1) = x / C*(x, u)
        let class = cacti();
        let u = 1.0;
        let rho = solve_phase(&class, u).unwrap().rho_u;
        let x = 0.5 * rho;
        let y = cstar_value(&class, x, u).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 50_000;
        let mut ones = 0;
        for _ in 0..n {
            let s = boltzmann_cstar(&class, x, u, 1_000_000, &mut rng).unwrap();
            if s.size() == 1 {
                ones += 1;
            }
            let g = s.graph.as_ref().unwrap();
            assert_eq!(g.size(), s.size());
            assert!(g.is_connected());
        }
        let p = x / y;
        assert!((ones as f64 / n as f64 - p).abs() < 4.0 * (p * (1.0 - p) / n as f64).sqrt());
    }

    #[test]
    fn rejects_x_above_singularity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = solve_phase(&cacti(), 1.0).unwrap().rho_u;
        assert!(boltzmann_cstar(&cacti(), 1.01 * rho, 1.0, 10, &mut rng).is_err());
    }
}

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use super::{BlockTreeError, PlaneTree};
use crate::classes::{phi_series, BlockClassSpec};
use crate::numeric::{Coefficient, NumericDomain};

/// Largest size for [`enumerate_plane_trees`] (Catalan(11) = 58786 trees).
pub const MAX_PLANE_TREE_SIZE: usize = 12;

pub fn catalan(n: usize) -> BigUint {
    // C_n = binom(2n, n) / (n + 1)
    let mut c = BigUint::one();
    for k in 0..n {
        c = c * BigUint::from(2 * (2 * k + 1)) / BigUint::from(k + 2);
    }
    c
}

/// `n! / (parts[0]! parts[1]! ...)`; the parts must sum to `n`.
pub fn multinomial(n: usize, parts: &[usize]) -> Option<BigUint> {
    if parts.iter().sum::<usize>() != n {
        return None;
    }
    let mut result = BigUint::one();
    let mut done = 0usize;
    for &p in parts {
        // multiply by binom(done + p, p)
        for j in 1..=p {
            result = result * BigUint::from(done + j) / BigUint::from(j);
        }
        done += p;
    }
    Some(result)
}

/// Number of rooted graphs on `1..=n` whose decorated tree has shape `t`,
/// given `phi_counts[d]`, the weighted number of decorations of size `d`
/// (that is `d! [y^d] Phi`).
pub fn count_graphs_for_tree<T: Coefficient>(t: &PlaneTree, phi_counts: &[T], domain: NumericDomain) -> Result<T, BlockTreeError> {
    let n = t.len();
    let degrees: Vec<usize> = t.outdegrees().iter().map(|&d| d as usize).collect();
    let mut acc = T::from_integer_in(domain, &BigInt::from(n));
    let m = multinomial(n - 1, &degrees).ok_or_else(|| BlockTreeError::InvalidTree("outdegrees do not sum to n - 1".into()))?;
    acc = acc.mul(&T::from_integer_in(domain, &BigInt::from(m)));
    for &d in &degrees {
        let phi = phi_counts.get(d).ok_or(BlockTreeError::MissingWeight(d))?;
        acc = acc.mul(phi);
    }
    Ok(acc)
}

/// [`count_graphs_for_tree`] with decoration counts taken from `class` at `u`.
pub fn count_graphs_for_tree_in_class<T: Coefficient>(t: &PlaneTree, class: &BlockClassSpec, u: &T, domain: NumericDomain) -> Result<T, BlockTreeError> {
    let order = t.outdegrees().iter().copied().max().unwrap_or(0) as usize;
    let phi = phi_series::<T>(class, u, order, domain).map_err(|_| BlockTreeError::MissingWeight(order))?;
    count_graphs_for_tree(t, &phi.egf_counts(), domain)
}

/// All plane trees with `n` vertices, in lexicographic order of their
/// outdegree sequences.
pub fn enumerate_plane_trees(n: usize) -> Result<Vec<PlaneTree>, BlockTreeError> {
    if n == 0 || n > MAX_PLANE_TREE_SIZE {
        return Err(BlockTreeError::InvalidTree(format!("size {n} outside 1..={MAX_PLANE_TREE_SIZE}")));
    }
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(n);
    fn rec(n: usize, s: i64, seq: &mut Vec<u32>, out: &mut Vec<PlaneTree>) {
        let i = seq.len();
        if i == n - 1 {
            if s == 0 {
                seq.push(0);
                out.push(PlaneTree { outdegrees: seq.clone() });
                seq.pop();
            }
            return;
        }
        let lo = (1 - s).max(0);
        let hi = n as i64 - i as i64 - 1 - s;
        for d in lo..=hi {
            seq.push(d as u32);
            rec(n, s + d - 1, seq, out);
            seq.pop();
        }
    }
    rec(n, 0, &mut seq, &mut out);
    Ok(out)
}

/// Outdegrees in decreasing order.
pub fn tree_degree_stats(t: &PlaneTree) -> Vec<u32> {
    let mut d = t.outdegrees().to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// Vertex indices ordered by decreasing outdegree, ties broken by preorder.
pub fn ranked_vertices(t: &PlaneTree) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..t.len()).collect();
    idx.sort_by_key(|&i| (std::cmp::Reverse(t.outdegrees()[i]), i));
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn catalan_numbers() {
        let c: Vec<u64> = (0..8).map(|n| catalan(n).try_into().unwrap()).collect();
        assert_eq!(c, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn plane_tree_counts() {
        for n in 1..=9 {
            let trees = enumerate_plane_trees(n).unwrap();
            assert_eq!(BigUint::from(trees.len()), catalan(n - 1));
            assert!(trees.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(4, &[2, 1, 1, 0]), Some(BigUint::from(12u32)));
        assert_eq!(multinomial(3, &[1, 1]), None);
    }

    #[test]
    fn tree_counts_sum_to_cayley() {
        // Decorations for trees: phi_d = u^d with u = 1, so d! [y^d] e^y = 1.
        for n in 1..=7usize {
            let ones = vec![BigRational::one(); n];
            let total: BigRational = enumerate_plane_trees(n)
                .unwrap()
                .iter()
                .map(|t| count_graphs_for_tree(t, &ones, NumericDomain::ExactRational).unwrap())
                .sum();
            assert_eq!(total, BigRational::from_integer(BigInt::from(n).pow(n as u32 - 1)));
        }
    }

    #[test]
    fn degree_ranking() {
        let t = PlaneTree::from_outdegrees(vec![1, 2, 0, 0]).unwrap();
        assert_eq!(tree_degree_stats(&t), vec![2, 1, 0, 0]);
        assert_eq!(ranked_vertices(&t), vec![1, 0, 2, 3]);
    }
}

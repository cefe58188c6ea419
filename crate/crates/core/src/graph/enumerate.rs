use super::{GraphError, LabelledGraph};

/// Largest vertex count for full enumeration (2^21 graphs at n = 7).
pub const MAX_ENUMERATION_SIZE: usize = 7;

/// Unordered pairs of `1..=n` in lexicographic order.
pub fn pairs(n: usize) -> Vec<(u32, u32)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 1..=n as u32 {
        for b in (a + 1)..=n as u32 {
            out.push((a, b));
        }
    }
    out
}

/// Position of `(a, b)`, `a < b`, in [`pairs`]`(n)`.
pub fn pair_index(n: usize, a: u32, b: u32) -> usize {
    let (a, b) = (a.min(b) as usize, a.max(b) as usize);
    (a - 1) * (2 * n - a) / 2 + (b - a - 1)
}

/// All labelled simple graphs on `1..=n` accepted by `predicate`.
///
/// Graphs are produced in increasing order of their edge bitmask, where bit
/// `i` stands for the `i`-th pair of [`pairs`]`(n)`.
pub fn enumerate_graphs<'a, F>(n: usize, predicate: F) -> Result<impl Iterator<Item = LabelledGraph> + 'a, GraphError>
where
    F: Fn(&LabelledGraph) -> bool + 'a,
{
    if n > MAX_ENUMERATION_SIZE {
        return Err(GraphError::TooLarge { n, max: MAX_ENUMERATION_SIZE });
    }
    let all = pairs(n);
    let total: u64 = 1 << all.len();
    Ok((0..total).filter_map(move |mask| {
        let edges: Vec<(u32, u32)> = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let g = LabelledGraph::new(n, edges, None).expect("enumerated graph is simple");
        predicate(&g).then_some(g)
    }))
}

pub fn count_graphs<F>(n: usize, predicate: F) -> Result<usize, GraphError>
where
    F: Fn(&LabelledGraph) -> bool,
{
    Ok(enumerate_graphs(n, predicate)?.count())
}

#[cfg(test)]
mod tests {
    use super::super::{is_2connected, is_planar};
    use super::*;

    #[test]
    fn pair_indexing() {
        let p = pairs(5);
        for (i, &(a, b)) in p.iter().enumerate() {
            assert_eq!(pair_index(5, a, b), i);
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_graphs(3, |g| g.is_connected()).unwrap(), 4);
        assert_eq!(count_graphs(3, is_2connected).unwrap(), 1);
        assert_eq!(count_graphs(4, |g| is_2connected(g) && is_planar(g).unwrap()).unwrap(), 10);
        assert!(enumerate_graphs(8, |_| true).is_err());
    }
}

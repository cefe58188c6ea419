use std::cell::RefCell;
use std::collections::HashMap;

use super::{GraphError, LabelledGraph};

/// Largest vertex count accepted by [`is_planar`].
pub const MAX_PLANARITY_SIZE: usize = 12;

thread_local! {
    static MEMO: RefCell<HashMap<(u8, u128), bool>> = RefCell::new(HashMap::new());
}

/// Planarity by exhaustive search for a K5 or K3,3 minor.
///
/// Only meant as a membership oracle for small graphs.
pub fn is_planar(g: &LabelledGraph) -> Result<bool, GraphError> {
    let n = g.vertex_count();
    if n > MAX_PLANARITY_SIZE {
        return Err(GraphError::TooLarge { n, max: MAX_PLANARITY_SIZE });
    }
    let ids: Vec<u32> = g.vertices().collect();
    let index = |v: u32| ids.binary_search(&v).unwrap();
    let mut adj = vec![0u16; n];
    for &(a, b) in g.edges() {
        let (i, j) = (index(a), index(b));
        adj[i] |= 1 << j;
        adj[j] |= 1 << i;
    }
    Ok(planar(adj))
}

fn edge_count(adj: &[u16]) -> usize {
    adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
}

// Drop vertices of degree <= 1 and smooth vertices of degree 2 until none remain.
fn reduce(mut adj: Vec<u16>) -> Vec<u16> {
    let mut alive: u16 = if adj.is_empty() { 0 } else { (1u32 << adj.len()).wrapping_sub(1) as u16 };
    loop {
        let mut changed = false;
        for v in 0..adj.len() {
            if alive & (1 << v) == 0 {
                continue;
            }
            let d = adj[v].count_ones();
            if d <= 2 {
                let nb = adj[v];
                for w in 0..adj.len() {
                    if nb & (1 << w) != 0 {
                        adj[w] &= !(1 << v);
                    }
                }
                if d == 2 {
                    let a = nb.trailing_zeros() as usize;
                    let b = 15 - nb.leading_zeros() as usize;
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                }
                adj[v] = 0;
                alive &= !(1 << v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    compact(&adj, alive)
}

fn compact(adj: &[u16], alive: u16) -> Vec<u16> {
    let keep: Vec<usize> = (0..adj.len()).filter(|&v| alive & (1 << v) != 0).collect();
    let mut pos = [usize::MAX; 16];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }
    keep.iter()
        .map(|&v| {
            let mut m = 0u16;
            for w in 0..adj.len() {
                if adj[v] & (1 << w) != 0 && pos[w] != usize::MAX {
                    m |= 1 << pos[w];
                }
            }
            m
        })
        .collect()
}

fn key(adj: &[u16]) -> (u8, u128) {
    let mut mask = 0u128;
    for j in 0..adj.len() {
        for i in 0..j {
            if adj[j] & (1 << i) != 0 {
                mask |= 1u128 << (j * (j - 1) / 2 + i);
            }
        }
    }
    (adj.len() as u8, mask)
}

fn is_bipartite(adj: &[u16]) -> bool {
    let n = adj.len();
    let mut colour = vec![u8::MAX; n];
    for s in 0..n {
        if colour[s] != u8::MAX {
            continue;
        }
        colour[s] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if adj[v] & (1 << w) != 0 {
                    if colour[w] == u8::MAX {
                        colour[w] = 1 - colour[v];
                        stack.push(w);
                    } else if colour[w] == colour[v] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn planar(adj: Vec<u16>) -> bool {
    let adj = reduce(adj);
    let n = adj.len();
    let m = edge_count(&adj);
    if n < 5 || m <= 8 {
        return true;
    }
    if m > 3 * n - 6 {
        return false;
    }
    if n == 5 && m == 10 {
        return false;
    }
    if n == 6 && m == 9 && is_bipartite(&adj) {
        return false;
    }
    let k = key(&adj);
    if let Some(v) = MEMO.with(|memo| memo.borrow().get(&k).copied()) {
        return v;
    }
    let mut result = true;
    'search: for a in 0..n {
        for b in (a + 1)..n {
            if adj[a] & (1 << b) == 0 {
                continue;
            }
            let mut del = adj.clone();
            del[a] &= !(1 << b);
            del[b] &= !(1 << a);
            if !planar(del) {
                result = false;
                break 'search;
            }
            let mut con = adj.clone();
            let merged = (con[a] | con[b]) & !(1 << a) & !(1 << b);
            for w in 0..n {
                con[w] &= !(1 << b);
                if merged & (1 << w) != 0 {
                    con[w] |= 1 << a;
                }
            }
            con[a] = merged;
            con[b] = 0;
            let alive = ((1u32 << n) - 1) as u16 & !(1 << b);
            if !planar(compact(&con, alive)) {
                result = false;
                break 'search;
            }
        }
    }
    MEMO.with(|memo| memo.borrow_mut().insert(k, result));
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> LabelledGraph {
        let mut e = Vec::new();
        for a in 1..=n {
            for b in (a + 1)..=n {
                e.push((a, b));
            }
        }
        LabelledGraph::new(n as usize, e, None).unwrap()
    }

    #[test]
    fn kuratowski_graphs() {
        assert!(is_planar(&complete(4)).unwrap());
        assert!(!is_planar(&complete(5)).unwrap());
        let mut e = Vec::new();
        for a in 1..=3 {
            for b in 4..=6 {
                e.push((a, b));
            }
        }
        let k33 = LabelledGraph::new(6, e, None).unwrap();
        assert!(!is_planar(&k33).unwrap());
        // triangular prism: 3-regular on 6 vertices, planar
        let prism: LabelledGraph = "6;1,2 2,3 1,3 4,5 5,6 4,6 1,4 2,5 3,6;".parse().unwrap();
        assert!(is_planar(&prism).unwrap());
    }

    #[test]
    fn petersen_is_not_planar() {
        let p: LabelledGraph =
            "10;1,2 2,3 3,4 4,5 1,5 1,6 2,7 3,8 4,9 5,10 6,8 8,10 7,10 7,9 6,9;".parse().unwrap();
        assert!(!is_planar(&p).unwrap());
    }

    #[test]
    fn subdivided_k5_is_not_planar() {
        let mut g = complete(5).edges().to_vec();
        g.retain(|&e| e != (1, 2));
        g.push((1, 6));
        g.push((2, 6));
        let h = LabelledGraph::new(6, g, None).unwrap();
        assert!(!is_planar(&h).unwrap());
    }

    #[test]
    fn size_limit() {
        assert!(is_planar(&complete(13)).is_err());
    }
}

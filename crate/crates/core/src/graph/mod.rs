//! Labelled simple graphs, block decomposition, planarity and enumeration.
//!
//! Labels are `1..=n`. A derived graph additionally owns one unlabelled vertex,
//! stored under the reserved id `0`; it does not count towards the size.

mod blocks;
mod enumerate;
mod planarity;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use blocks::{block_cut_tree, block_decompose, is_2connected, Block, BlockCutTree, BlockDecomposition};
pub use enumerate::{count_graphs, enumerate_graphs, pair_index, pairs, MAX_ENUMERATION_SIZE};
pub use planarity::{is_planar, MAX_PLANARITY_SIZE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(u32),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(u32, u32),
    #[error("vertex {0} outside the label range")]
    LabelOutOfRange(u32),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph needs at least {0} vertices")]
    TooSmall(usize),
    #[error("size {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("empty vertex subset")]
    EmptyKeep,
    #[error("graph has no root")]
    Rootless,
    #[error("cannot parse graph: {0}")]
    Parse(String),
}

/// Simple graph on labels `1..=size`, plus vertex `0` when derived.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelledGraph {
    size: usize,
    derived: bool,
    edges: Vec<(u32, u32)>,
    root: Option<u32>,
}

impl LabelledGraph {
    /// Ordinary labelled graph; edges may be given in any order or orientation.
    pub fn new(size: usize, edges: Vec<(u32, u32)>, root: Option<u32>) -> Result<Self, GraphError> {
        Self::build(size, false, edges, root)
    }

    /// Derived graph: labels `1..=size` plus the unlabelled vertex `0`.
    pub fn new_derived(size: usize, edges: Vec<(u32, u32)>) -> Result<Self, GraphError> {
        Self::build(size, true, edges, None)
    }

    fn build(size: usize, derived: bool, edges: Vec<(u32, u32)>, root: Option<u32>) -> Result<Self, GraphError> {
        let lo = if derived { 0 } else { 1 };
        let mut norm = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::Loop(a));
            }
            for v in [a, b] {
                if v < lo || v as usize > size {
                    return Err(GraphError::LabelOutOfRange(v));
                }
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        for w in norm.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        if let Some(r) = root {
            if r < lo || r as usize > size {
                return Err(GraphError::LabelOutOfRange(r));
            }
        }
        Ok(LabelledGraph { size, derived, edges: norm, root })
    }

    /// Number of labelled vertices.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of vertices including the unlabelled one.
    pub fn vertex_count(&self) -> usize {
        self.size + usize::from(self.derived)
    }

    pub fn is_derived(&self) -> bool {
        self.derived
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn root(&self) -> Option<u32> {
        self.root
    }

    pub fn with_root(&self, root: u32) -> Result<Self, GraphError> {
        Self::build(self.size, self.derived, self.edges.clone(), Some(root))
    }

    pub fn without_root(&self) -> Self {
        LabelledGraph { root: None, ..self.clone() }
    }

    /// Vertex ids: `0..=size` for derived graphs, `1..=size` otherwise.
    pub fn vertices(&self) -> impl Iterator<Item = u32> {
        let lo = if self.derived { 0 } else { 1 };
        lo..=self.size as u32
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.edges.binary_search(&(a.min(b), a.max(b))).is_ok()
    }

    /// Adjacency lists indexed by vertex id (slot 0 empty for ordinary graphs).
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.size + 1];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let count = self.vertex_count();
        if count <= 1 {
            return true;
        }
        let adj = self.adjacency();
        let start = self.vertices().next().unwrap();
        let mut seen = vec![false; self.size + 1];
        let mut stack = vec![start];
        seen[start as usize] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == count
    }

    /// Treat the unlabelled vertex as an ordinary vertex with label
    /// `size + 1`, giving an ordinary graph on `size + 1` labels.
    pub fn underived(&self) -> LabelledGraph {
        if !self.derived {
            return self.clone();
        }
        let top = self.size as u32 + 1;
        let edges = self.edges.iter().map(|&(a, b)| (if a == 0 { top } else { a }, b)).collect();
        LabelledGraph::new(self.size + 1, edges, None).expect("relabelled derived graph is valid")
    }
}

/// Restriction of `g` to `keep`, relabelled to `1..=|keep|` preserving label order.
///
/// The unlabelled vertex of a derived graph, if kept, stays unlabelled. The
/// root is carried along when it is kept.
pub fn consistent_relabel(g: &LabelledGraph, keep: &[u32]) -> Result<LabelledGraph, GraphError> {
    if keep.is_empty() {
        return Err(GraphError::EmptyKeep);
    }
    let mut sorted: Vec<u32> = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let lo = if g.derived { 0 } else { 1 };
    for &v in &sorted {
        if v < lo || v as usize > g.size {
            return Err(GraphError::LabelOutOfRange(v));
        }
    }
    let keeps_zero = g.derived && sorted[0] == 0;
    let mut map = vec![u32::MAX; g.size + 1];
    let mut next = 1;
    for &v in &sorted {
        if v == 0 {
            map[0] = 0;
        } else {
            map[v as usize] = next;
            next += 1;
        }
    }
    let edges: Vec<(u32, u32)> = g
        .edges
        .iter()
        .filter(|&&(a, b)| map[a as usize] != u32::MAX && map[b as usize] != u32::MAX)
        .map(|&(a, b)| (map[a as usize], map[b as usize]))
        .collect();
    let size = (next - 1) as usize;
    let root = g.root.and_then(|r| (map[r as usize] != u32::MAX).then(|| map[r as usize]));
    LabelledGraph::build(size, keeps_zero, edges, root)
}

impl fmt::Display for LabelledGraph {
    /// Exchange format `n;u,v u,v;root`, with a leading `*` for derived graphs.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.derived {
            write!(f, "*")?;
        }
        write!(f, "{};", self.size)?;
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{a},{b}")?;
        }
        write!(f, ";")?;
        if let Some(r) = self.root {
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelledGraph({self})")
    }
}

impl FromStr for LabelledGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (derived, body) = match s.strip_prefix('*') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let parts: Vec<&str> = body.split(';').collect();
        if parts.len() != 3 {
            return Err(GraphError::Parse(format!("expected three ';'-separated fields in {s:?}")));
        }
        let bad = |what: &str| GraphError::Parse(format!("bad {what} in {s:?}"));
        let size: usize = parts[0].trim().parse().map_err(|_| bad("size"))?;
        let mut edges = Vec::new();
        for tok in parts[1].split_whitespace() {
            let (a, b) = tok.split_once(',').ok_or_else(|| bad("edge"))?;
            edges.push((a.parse().map_err(|_| bad("edge"))?, b.parse().map_err(|_| bad("edge"))?));
        }
        let root = match parts[2].trim() {
            "" => None,
            r => Some(r.parse().map_err(|_| bad("root"))?),
        };
        LabelledGraph::build(size, derived, edges, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> LabelledGraph {
        s.parse().unwrap()
    }

    #[test]
    fn construction_validates() {
        assert_eq!(LabelledGraph::new(2, vec![(1, 1)], None), Err(GraphError::Loop(1)));
        assert_eq!(LabelledGraph::new(2, vec![(1, 2), (2, 1)], None), Err(GraphError::DuplicateEdge(1, 2)));
        assert_eq!(LabelledGraph::new(2, vec![(0, 1)], None), Err(GraphError::LabelOutOfRange(0)));
        assert!(LabelledGraph::new_derived(2, vec![(0, 1), (1, 2), (0, 2)]).is_ok());
    }

    #[test]
    fn exchange_format_roundtrip() {
        let x = g("3;2,3 1,2;1");
        assert_eq!(x.to_string(), "3;1,2 2,3;1");
        assert_eq!(g(&x.to_string()), x);
        let d = g("*2;0,1 0,2 1,2;");
        assert!(d.is_derived());
        assert_eq!(d.vertex_count(), 3);
        assert_eq!(g(&d.to_string()), d);
        assert!("3;1-2;".parse::<LabelledGraph>().is_err());
    }

    #[test]
    fn relabel_examples() {
        let x = g("7;2,5 5,7 1,2;5");
        let r = consistent_relabel(&x, &[2, 5, 7]).unwrap();
        assert_eq!(r, g("3;1,2 2,3;2"));
        assert_eq!(consistent_relabel(&x, &[1, 2, 3, 4, 5, 6, 7]).unwrap(), x);
        let y = g("9;3,9;");
        assert_eq!(consistent_relabel(&y, &[9, 3]).unwrap(), g("2;1,2;"));
        assert_eq!(consistent_relabel(&y, &[]), Err(GraphError::EmptyKeep));
    }

    #[test]
    fn connectivity() {
        assert!(g("3;1,2 2,3;").is_connected());
        assert!(!g("3;1,2;").is_connected());
        assert!(g("1;;").is_connected());
    }
}

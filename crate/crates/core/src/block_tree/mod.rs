//! Decorated block trees of rooted connected graphs and the inverse gluing.
//!
//! Every non-root vertex `v` has a parent block: the block through which it
//! is reached from the root. The decoration of `v` is the set of the other
//! blocks containing `v`, each seen as a derived graph with `v` unlabelled.
//! The children of `v` are the remaining vertices of those blocks in
//! increasing label order, and the decoration is labelled by child rank.

mod counting;

use std::fmt;

use thiserror::Error;

pub use counting::{
    catalan, count_graphs_for_tree, count_graphs_for_tree_in_class, enumerate_plane_trees, multinomial, ranked_vertices, tree_degree_stats,
    MAX_PLANE_TREE_SIZE,
};

use crate::classes::BlockClassSpec;
use crate::graph::{block_decompose, is_2connected, GraphError, LabelledGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlockTreeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid plane tree: {0}")]
    InvalidTree(String),
    #[error("invalid label allocation: {0}")]
    InvalidAllocation(String),
    #[error("invalid decoration: {0}")]
    InvalidDecoration(String),
    #[error("block {0} is not in the class")]
    BlockNotInClass(String),
    #[error("missing decoration weight for size {0}")]
    MissingWeight(usize),
    #[error("cannot parse decorated tree: {0}")]
    Parse(String),
}

/// Plane tree stored as its preorder outdegree sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneTree {
    outdegrees: Vec<u32>,
}

impl PlaneTree {
    /// Validates the Lukasiewicz condition: partial sums of `d - 1` stay
    /// nonnegative until the last vertex, where they reach `-1`.
    pub fn from_outdegrees(outdegrees: Vec<u32>) -> Result<Self, BlockTreeError> {
        if outdegrees.is_empty() {
            return Err(BlockTreeError::InvalidTree("empty".into()));
        }
        let mut s: i64 = 0;
        for (i, &d) in outdegrees.iter().enumerate() {
            s += d as i64 - 1;
            if s < 0 && i + 1 != outdegrees.len() {
                return Err(BlockTreeError::InvalidTree(format!("walk exits early at position {i}")));
            }
        }
        if s != -1 {
            return Err(BlockTreeError::InvalidTree(format!("outdegrees sum to {} for {} vertices", s + outdegrees.len() as i64, outdegrees.len())));
        }
        Ok(PlaneTree { outdegrees })
    }

    pub fn single_vertex() -> Self {
        PlaneTree { outdegrees: vec![0] }
    }

    pub fn len(&self) -> usize {
        self.outdegrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outdegrees.is_empty()
    }

    pub fn outdegrees(&self) -> &[u32] {
        &self.outdegrees
    }

    /// Child lists in plane order, indexed by preorder position.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut children: Vec<Vec<usize>> = self.outdegrees.iter().map(|&d| Vec::with_capacity(d as usize)).collect();
        let mut stack: Vec<usize> = Vec::new();
        if self.outdegrees[0] > 0 {
            stack.push(0);
        }
        for i in 1..n {
            let p = *stack.last().expect("valid tree");
            children[p].push(i);
            if children[p].len() == self.outdegrees[p] as usize {
                stack.pop();
            }
            if self.outdegrees[i] > 0 {
                stack.push(i);
            }
        }
        children
    }

    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.len()];
        for (p, ch) in self.children().iter().enumerate() {
            for &c in ch {
                parents[c] = Some(p);
            }
        }
        parents
    }

    /// Depth of every vertex (root at depth 0).
    pub fn depths(&self) -> Vec<usize> {
        let parents = self.parents();
        let mut depth = vec![0; self.len()];
        for i in 1..self.len() {
            depth[i] = depth[parents[i].unwrap()] + 1;
        }
        depth
    }
}

/// One derived block inside a decoration.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DecorationBlock {
    /// Decoration labels used by the block, increasing.
    pub labels: Vec<u32>,
    /// The block as a derived graph on `1..=labels.len()`; label `i` stands
    /// for `labels[i - 1]`.
    pub shape: LabelledGraph,
}

impl DecorationBlock {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// The block as a derived graph labelled by decoration labels.
    pub fn edges_in_decoration(&self) -> Vec<(u32, u32)> {
        let map = |v: u32| if v == 0 { 0 } else { self.labels[v as usize - 1] };
        self.shape.edges().iter().map(|&(a, b)| (map(a), map(b))).collect()
    }
}

/// Well-labelled set of derived blocks, blocks ordered by smallest label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Decoration {
    pub blocks: Vec<DecorationBlock>,
    pub total_size: usize,
}

impl Decoration {
    pub fn empty() -> Self {
        Decoration::default()
    }

    /// Sorts the blocks and checks that the labels form `1..=total`.
    pub fn new(mut blocks: Vec<DecorationBlock>) -> Result<Self, BlockTreeError> {
        blocks.sort_by_key(|b| b.labels.first().copied().unwrap_or(0));
        let total: usize = blocks.iter().map(|b| b.size()).sum();
        let mut seen = vec![false; total + 1];
        for b in &blocks {
            if b.labels.is_empty() || !b.shape.is_derived() || b.shape.size() != b.labels.len() {
                return Err(BlockTreeError::InvalidDecoration(format!("malformed block {}", b.shape)));
            }
            if b.labels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(BlockTreeError::InvalidDecoration("block labels not increasing".into()));
            }
            for &l in &b.labels {
                if l == 0 || l as usize > total || seen[l as usize] {
                    return Err(BlockTreeError::InvalidDecoration(format!("label {l} repeated or out of range")));
                }
                seen[l as usize] = true;
            }
            if !is_2connected(&b.shape) {
                return Err(BlockTreeError::InvalidDecoration(format!("block {} is not 2-connected", b.shape)));
            }
        }
        Ok(Decoration { blocks, total_size: total })
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.size()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Plane tree with one decoration per vertex (preorder).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecoratedBlockTree {
    pub tree: PlaneTree,
    pub decorations: Vec<Decoration>,
}

impl DecoratedBlockTree {
    pub fn new(tree: PlaneTree, decorations: Vec<Decoration>) -> Result<Self, BlockTreeError> {
        if decorations.len() != tree.len() {
            return Err(BlockTreeError::InvalidDecoration("one decoration per vertex required".into()));
        }
        for (i, (d, &deg)) in decorations.iter().zip(tree.outdegrees()).enumerate() {
            if d.total_size != deg as usize {
                return Err(BlockTreeError::InvalidDecoration(format!("vertex {i}: decoration size {} vs outdegree {deg}", d.total_size)));
            }
        }
        Ok(DecoratedBlockTree { tree, decorations })
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    /// All derived block sizes, vertex by vertex.
    pub fn block_sizes(&self) -> Vec<usize> {
        self.decorations.iter().flat_map(|d| d.block_sizes()).collect()
    }
}

/// Root label and, per vertex, the labels given to its children.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabelAllocation {
    pub root_label: u32,
    /// Increasing label sets, one per vertex in preorder.
    pub labels: Vec<Vec<u32>>,
}

impl LabelAllocation {
    pub fn validate(&self, tree: &PlaneTree) -> Result<(), BlockTreeError> {
        let n = tree.len();
        if self.labels.len() != n {
            return Err(BlockTreeError::InvalidAllocation(format!("{} label sets for {n} vertices", self.labels.len())));
        }
        let mut seen = vec![false; n + 1];
        let mut mark = |l: u32| {
            if l == 0 || l as usize > n || seen[l as usize] {
                return Err(BlockTreeError::InvalidAllocation(format!("label {l} repeated or out of range")));
            }
            seen[l as usize] = true;
            Ok(())
        };
        mark(self.root_label)?;
        for (i, set) in self.labels.iter().enumerate() {
            if set.len() != tree.outdegrees()[i] as usize {
                return Err(BlockTreeError::InvalidAllocation(format!("vertex {i}: {} labels for outdegree {}", set.len(), tree.outdegrees()[i])));
            }
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return Err(BlockTreeError::InvalidAllocation(format!("vertex {i}: labels not increasing")));
            }
            for &l in set {
                mark(l)?;
            }
        }
        Ok(())
    }

    /// Graph label of every tree vertex (preorder).
    pub fn vertex_labels(&self, tree: &PlaneTree) -> Vec<u32> {
        let mut out = vec![0; tree.len()];
        out[0] = self.root_label;
        for (v, ch) in tree.children().iter().enumerate() {
            for (j, &c) in ch.iter().enumerate() {
                out[c] = self.labels[v][j];
            }
        }
        out
    }
}

/// Decorated block tree of a rooted connected graph, with the allocation
/// needed to rebuild exactly that graph.
pub fn build_block_tree(g: &LabelledGraph) -> Result<(DecoratedBlockTree, LabelAllocation), BlockTreeError> {
    let root = g.root().ok_or(GraphError::Rootless)?;
    if g.is_derived() {
        return Err(BlockTreeError::InvalidDecoration("derived graphs have no block tree".into()));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let n = g.size();
    if n == 1 {
        let tree = PlaneTree::single_vertex();
        return Ok((DecoratedBlockTree { tree, decorations: vec![Decoration::empty()] }, LabelAllocation { root_label: root, labels: vec![Vec::new()] }));
    }
    let dec = block_decompose(g)?;
    let mut blocks_at: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (i, b) in dec.blocks.iter().enumerate() {
        for &v in &b.vertices {
            blocks_at[v as usize].push(i);
        }
    }
    let mut outdegrees = Vec::with_capacity(n);
    let mut decorations = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    // (vertex, parent block)
    let mut stack: Vec<(u32, Option<usize>)> = vec![(root, None)];
    while let Some((v, parent_block)) = stack.pop() {
        let own: Vec<usize> = blocks_at[v as usize].iter().copied().filter(|&b| Some(b) != parent_block).collect();
        let mut children: Vec<u32> = own.iter().flat_map(|&b| dec.blocks[b].vertices.iter().copied()).filter(|&w| w != v).collect();
        children.sort_unstable();
        let rank = |w: u32| children.binary_search(&w).unwrap() as u32 + 1;
        let mut dblocks = Vec::with_capacity(own.len());
        let mut child_block = vec![0usize; children.len()];
        for &b in &own {
            let block = &dec.blocks[b];
            let others: Vec<u32> = block.vertices.iter().copied().filter(|&w| w != v).collect();
            // others is increasing in graph labels, hence in decoration labels
            let local = |w: u32| if w == v { 0 } else { others.binary_search(&w).unwrap() as u32 + 1 };
            let shape_edges = block.edges.iter().map(|&(a, c)| (local(a), local(c))).collect();
            let shape = LabelledGraph::new_derived(others.len(), shape_edges)?;
            for &w in &others {
                child_block[rank(w) as usize - 1] = b;
            }
            dblocks.push(DecorationBlock { labels: others.iter().map(|&w| rank(w)).collect(), shape });
        }
        outdegrees.push(children.len() as u32);
        decorations.push(Decoration::new(dblocks)?);
        for (j, &c) in children.iter().enumerate().rev() {
            stack.push((c, Some(child_block[j])));
        }
        labels.push(children);
    }
    let tree = PlaneTree::from_outdegrees(outdegrees)?;
    Ok((DecoratedBlockTree::new(tree, decorations)?, LabelAllocation { root_label: root, labels }))
}

/// Glue the decorations along their unlabelled vertices and assign labels
/// from the allocation; optionally check every block against a class.
pub fn rebuild_graph(t: &DecoratedBlockTree, alloc: &LabelAllocation, class: Option<&BlockClassSpec>) -> Result<LabelledGraph, BlockTreeError> {
    alloc.validate(&t.tree)?;
    let kind = match class {
        Some(c) => Some(c.block_tools().map_err(|e| BlockTreeError::BlockNotInClass(e.to_string()))?.kind),
        None => None,
    };
    let children = t.tree.children();
    let glabel = alloc.vertex_labels(&t.tree);
    let mut edges = Vec::with_capacity(t.len());
    for (v, dec) in t.decorations.iter().enumerate() {
        if dec.total_size != children[v].len() {
            return Err(BlockTreeError::InvalidDecoration(format!("vertex {v}: decoration size and outdegree differ")));
        }
        for b in &dec.blocks {
            if let Some(kind) = kind {
                if !kind.contains_block(&b.shape) {
                    return Err(BlockTreeError::BlockNotInClass(b.shape.to_string()));
                }
            }
            let map = |x: u32| if x == 0 { glabel[v] } else { glabel[children[v][b.labels[x as usize - 1] as usize - 1]] };
            for &(a, c) in b.shape.edges() {
                edges.push((map(a), map(c)));
            }
        }
    }
    Ok(LabelledGraph::new(t.len(), edges, Some(alloc.root_label))?)
}

impl fmt::Display for DecoratedBlockTree {
    /// `(decoration child child ...)` where a decoration is
    /// `[labels:graph|labels:graph]` and graphs use the exchange format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let children = self.tree.children();
        fn write_vertex(t: &DecoratedBlockTree, children: &[Vec<usize>], v: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "([")?;
            for (i, b) in t.decorations[v].blocks.iter().enumerate() {
                if i > 0 {
                    write!(f, "|")?;
                }
                let labels: Vec<String> = b.labels.iter().map(u32::to_string).collect();
                write!(f, "{}:{}", labels.join(","), b.shape)?;
            }
            write!(f, "]")?;
            for &c in &children[v] {
                write!(f, " ")?;
                write_vertex(t, children, c, f)?;
            }
            write!(f, ")")
        }
        write_vertex(self, &children, 0, f)
    }
}

/// Parse the format written by `Display`.
pub fn parse_decorated_tree(s: &str) -> Result<DecoratedBlockTree, BlockTreeError> {
    let chars: Vec<char> = s.trim().chars().collect();
    let mut pos = 0;
    let mut outdegrees = Vec::new();
    let mut decorations = Vec::new();
    parse_vertex(&chars, &mut pos, &mut outdegrees, &mut decorations)?;
    if pos != chars.len() {
        return Err(BlockTreeError::Parse(format!("trailing input at {pos}")));
    }
    DecoratedBlockTree::new(PlaneTree::from_outdegrees(outdegrees)?, decorations)
}

fn expect(chars: &[char], pos: &mut usize, c: char) -> Result<(), BlockTreeError> {
    if chars.get(*pos) == Some(&c) {
        *pos += 1;
        Ok(())
    } else {
        Err(BlockTreeError::Parse(format!("expected {c:?} at {pos}")))
    }
}

fn parse_vertex(chars: &[char], pos: &mut usize, outdegrees: &mut Vec<u32>, decorations: &mut Vec<Decoration>) -> Result<(), BlockTreeError> {
    expect(chars, pos, '(')?;
    expect(chars, pos, '[')?;
    let start = *pos;
    while *pos < chars.len() && chars[*pos] != ']' {
        *pos += 1;
    }
    let body: String = chars[start..*pos].iter().collect();
    expect(chars, pos, ']')?;
    let mut blocks = Vec::new();
    for part in body.split('|').filter(|p| !p.is_empty()) {
        let (labels, graph) = part.split_once(':').ok_or_else(|| BlockTreeError::Parse(format!("block {part:?} lacks ':'")))?;
        let labels = labels
            .split(',')
            .map(|l| l.trim().parse::<u32>().map_err(|_| BlockTreeError::Parse(format!("bad label {l:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let shape: LabelledGraph = graph.parse()?;
        blocks.push(DecorationBlock { labels, shape });
    }
    let index = outdegrees.len();
    outdegrees.push(0);
    decorations.push(Decoration::new(blocks)?);
    let mut count = 0;
    while chars.get(*pos) == Some(&' ') {
        *pos += 1;
        parse_vertex(chars, pos, outdegrees, decorations)?;
        count += 1;
    }
    outdegrees[index] = count;
    expect(chars, pos, ')')
}

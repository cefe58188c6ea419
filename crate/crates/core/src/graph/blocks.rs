use super::{GraphError, LabelledGraph};

/// A maximal 2-connected subgraph (or bridge), as sorted vertex and edge lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
}

impl Block {
    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

/// Blocks in canonical (sorted) order together with the cut vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
    pub cut_vertices: Vec<u32>,
}

impl BlockDecomposition {
    /// Indices of the blocks containing `v`.
    pub fn blocks_at(&self, v: u32) -> Vec<usize> {
        (0..self.blocks.len()).filter(|&i| self.blocks[i].contains(v)).collect()
    }
}

/// Hopcroft-Tarjan biconnected components with an explicit DFS stack.
pub fn block_decompose(g: &LabelledGraph) -> Result<BlockDecomposition, GraphError> {
    if g.vertex_count() < 2 {
        return Err(GraphError::TooSmall(2));
    }
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let adj = g.adjacency();
    let slots = g.size() + 1;
    let mut disc = vec![u32::MAX; slots];
    let mut low = vec![0u32; slots];
    let mut edge_stack: Vec<(u32, u32)> = Vec::new();
    let mut blocks = Vec::new();
    let start = g.vertices().next().unwrap();
    // frame: (vertex, parent, next neighbour index)
    let mut stack: Vec<(u32, u32, usize)> = vec![(start, u32::MAX, 0)];
    disc[start as usize] = 0;
    low[start as usize] = 0;
    let mut time = 1;
    while let Some(top) = stack.last_mut() {
        let (v, parent, idx) = *top;
        if idx < adj[v as usize].len() {
            top.2 += 1;
            let w = adj[v as usize][idx];
            if disc[w as usize] == u32::MAX {
                disc[w as usize] = time;
                low[w as usize] = time;
                time += 1;
                edge_stack.push((v, w));
                stack.push((w, v, 0));
            } else if w != parent && disc[w as usize] < disc[v as usize] {
                edge_stack.push((v, w));
                low[v as usize] = low[v as usize].min(disc[w as usize]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p as usize] = low[p as usize].min(low[v as usize]);
                if low[v as usize] >= disc[p as usize] {
                    let mut edges = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        edges.push((e.0.min(e.1), e.0.max(e.1)));
                        if e == (p, v) {
                            break;
                        }
                    }
                    edges.sort_unstable();
                    let mut vertices: Vec<u32> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
                    vertices.sort_unstable();
                    vertices.dedup();
                    blocks.push(Block { vertices, edges });
                }
            }
        }
    }
    blocks.sort();
    let mut count = vec![0usize; slots];
    for b in &blocks {
        for &v in &b.vertices {
            count[v as usize] += 1;
        }
    }
    let cut_vertices = (0..slots as u32).filter(|&v| count[v as usize] >= 2).collect();
    Ok(BlockDecomposition { blocks, cut_vertices })
}

/// True for a single edge, or a connected graph on at least three vertices
/// without cut vertices.
pub fn is_2connected(g: &LabelledGraph) -> bool {
    match g.vertex_count() {
        0 | 1 => false,
        2 => g.edge_count() == 1,
        _ => match block_decompose(g) {
            Ok(d) => d.blocks.len() == 1,
            Err(_) => false,
        },
    }
}

/// Bipartite block / cut-vertex tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCutTree {
    pub blocks: Vec<Block>,
    pub cut_vertices: Vec<u32>,
    /// `(block index, cut vertex)` adjacencies.
    pub edges: Vec<(usize, u32)>,
}

impl BlockCutTree {
    pub fn node_count(&self) -> usize {
        self.blocks.len() + self.cut_vertices.len()
    }

    /// Checks that the bipartite graph is a tree.
    pub fn is_tree(&self) -> bool {
        if self.edges.len() + 1 != self.node_count() {
            return false;
        }
        // union-find over blocks then cut vertices
        let nb = self.blocks.len();
        let mut parent: Vec<usize> = (0..self.node_count()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(b, c) in &self.edges {
            let ci = nb + self.cut_vertices.binary_search(&c).expect("cut vertex listed");
            let (rb, rc) = (find(&mut parent, b), find(&mut parent, ci));
            if rb == rc {
                return false;
            }
            parent[rb] = rc;
        }
        true
    }
}

pub fn block_cut_tree(g: &LabelledGraph) -> Result<BlockCutTree, GraphError> {
    if g.vertex_count() == 1 {
        return Ok(BlockCutTree { blocks: Vec::new(), cut_vertices: Vec::new(), edges: Vec::new() });
    }
    let d = block_decompose(g)?;
    let mut edges = Vec::new();
    for (i, b) in d.blocks.iter().enumerate() {
        for &c in &d.cut_vertices {
            if b.contains(c) {
                edges.push((i, c));
            }
        }
    }
    Ok(BlockCutTree { blocks: d.blocks, cut_vertices: d.cut_vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> LabelledGraph {
        s.parse().unwrap()
    }

    #[test]
    fn small_decompositions() {
        let path = block_decompose(&g("3;1,2 2,3;")).unwrap();
        assert_eq!(path.blocks.len(), 2);
        assert_eq!(path.blocks[0].edges, vec![(1, 2)]);
        assert_eq!(path.blocks[1].edges, vec![(2, 3)]);
        assert_eq!(path.cut_vertices, vec![2]);

        let tri = block_decompose(&g("3;1,2 1,3 2,3;")).unwrap();
        assert_eq!(tri.blocks.len(), 1);
        assert!(tri.cut_vertices.is_empty());

        let bowtie = block_decompose(&g("5;1,2 1,3 2,3 3,4 3,5 4,5;")).unwrap();
        assert_eq!(bowtie.blocks.len(), 2);
        assert_eq!(bowtie.cut_vertices, vec![3]);

        assert_eq!(block_decompose(&g("3;1,2;")), Err(GraphError::Disconnected));
        assert_eq!(block_decompose(&g("1;;")), Err(GraphError::TooSmall(2)));
    }

    #[test]
    fn two_connectivity() {
        assert!(is_2connected(&g("2;1,2;")));
        assert!(!is_2connected(&g("1;;")));
        assert!(!is_2connected(&g("3;1,2 2,3;")));
        assert!(is_2connected(&g("4;1,2 2,3 3,4 1,4;")));
        assert!(is_2connected(&g("*2;0,1 0,2 1,2;")));
    }

    #[test]
    fn cut_trees() {
        let t = block_cut_tree(&g("3;1,2 2,3;")).unwrap();
        assert_eq!(t.node_count(), 3);
        assert_eq!(t.edges, vec![(0, 2), (1, 2)]);
        assert!(t.is_tree());
        let tri = block_cut_tree(&g("3;1,2 1,3 2,3;")).unwrap();
        assert_eq!(tri.node_count(), 1);
        let bow = block_cut_tree(&g("5;1,2 1,3 2,3 3,4 3,5 4,5;")).unwrap();
        assert_eq!(bow.edges, vec![(0, 3), (1, 3)]);
        assert!(bow.is_tree());
    }
}

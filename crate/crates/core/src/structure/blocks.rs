use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum BlockKind {
    Bridge,
    Cyclic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    /// Sorted.
    pub vertices: Vec<usize>,
    /// Sorted.
    pub edges: Vec<Edge>,
    pub kind: BlockKind,
}

impl Block {
    pub fn is_bridge(&self) -> bool {
        self.kind == BlockKind::Bridge
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn min_vertex(&self) -> usize {
        self.vertices[0]
    }

    /// Smallest vertex other than `v`.
    pub fn min_vertex_except(&self, v: usize) -> usize {
        self.vertices.iter().copied().find(|&w| w != v).unwrap_or(v)
    }

    /// The block as a standalone graph, with the local-to-host vertex map.
    pub fn to_graph(&self, host: &Graph) -> Result<(Graph, Vec<usize>)> {
        host.induced(&self.vertices)
    }
}

/// Blocks of a connected graph and the cut vertices gluing them together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCutTree {
    /// Sorted by smallest vertex, then by the vertex list.
    pub blocks: Vec<Block>,
    pub cut_vertices: Vec<usize>,
    /// Indices of the blocks containing each vertex, ascending.
    pub vertex_blocks: Vec<Vec<usize>>,
}

impl BlockCutTree {
    pub fn is_cut_vertex(&self, v: usize) -> bool {
        self.vertex_blocks[v].len() >= 2
    }

    /// Bipartite tree edges `(block index, cut vertex)`.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.cut_vertices
            .iter()
            .flat_map(|&c| self.vertex_blocks[c].iter().map(move |&b| (b, c)))
            .collect()
    }

    pub fn cyclic_blocks(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.blocks.len()).filter(|&b| !self.blocks[b].is_bridge())
    }
}

/// Splits a connected graph into its blocks (Hopcroft–Tarjan with an edge stack).
pub fn decompose(g: &Graph) -> Result<BlockCutTree> {
    if g.m() == 0 {
        return Err(Error::Argument("graph has no edges".into()));
    }
    if !g.is_connected() {
        return Err(Error::Argument("graph is disconnected".into()));
    }
    let n = g.n();
    let mut order = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut edge_stack: Vec<Edge> = Vec::new();
    let mut raw_blocks: Vec<Vec<Edge>> = Vec::new();

    order[0] = 0;
    low[0] = 0;
    timer += 1;
    let mut stack = vec![(0usize, usize::MAX, 0usize)];
    while let Some(frame) = stack.last_mut() {
        let (v, parent, idx) = *frame;
        if idx < g.degree(v) {
            frame.2 += 1;
            let w = g.neighbors(v)[idx];
            if w == parent {
                continue;
            }
            if order[w] == usize::MAX {
                order[w] = timer;
                low[w] = timer;
                timer += 1;
                edge_stack.push(Edge::new(v, w));
                stack.push((w, v, 0));
            } else if order[w] < order[v] {
                edge_stack.push(Edge::new(v, w));
                low[v] = low[v].min(order[w]);
            }
        } else {
            stack.pop();
            if parent == usize::MAX {
                continue;
            }
            low[parent] = low[parent].min(low[v]);
            if low[v] >= order[parent] {
                let tree_edge = Edge::new(parent, v);
                let mut edges = Vec::new();
                while let Some(e) = edge_stack.pop() {
                    edges.push(e);
                    if e == tree_edge {
                        break;
                    }
                }
                raw_blocks.push(edges);
            }
        }
    }

    let mut blocks: Vec<Block> = raw_blocks
        .into_iter()
        .map(|mut edges| {
            edges.sort_unstable();
            let mut vertices: Vec<usize> = edges.iter().flat_map(|e| [e.lo(), e.hi()]).collect();
            vertices.sort_unstable();
            vertices.dedup();
            let kind = if vertices.len() == 2 {
                BlockKind::Bridge
            } else {
                BlockKind::Cyclic
            };
            Block {
                vertices,
                edges,
                kind,
            }
        })
        .collect();
    blocks.sort_by(|a, b| a.vertices.cmp(&b.vertices));

    let mut vertex_blocks = vec![Vec::new(); n];
    for (i, b) in blocks.iter().enumerate() {
        for &v in &b.vertices {
            vertex_blocks[v].push(i);
        }
    }
    let cut_vertices = (0..n).filter(|&v| vertex_blocks[v].len() >= 2).collect();
    Ok(BlockCutTree {
        blocks,
        cut_vertices,
        vertex_blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::tests::mixed_instance;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn bowtie_has_two_cyclic_blocks() {
        let bowtie = g(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]);
        let bct = decompose(&bowtie).unwrap();
        assert_eq!(bct.blocks.len(), 2);
        assert!(bct.blocks.iter().all(|b| b.kind == BlockKind::Cyclic));
        assert_eq!(bct.cut_vertices, vec![2]);
    }

    #[test]
    fn path_has_two_bridges() {
        let bct = decompose(&g(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(bct.blocks.len(), 2);
        assert!(bct.blocks.iter().all(Block::is_bridge));
        assert_eq!(bct.cut_vertices, vec![1]);
    }

    #[test]
    fn mixed_instance_blocks() {
        let (graph, names) = mixed_instance();
        let bct = decompose(&graph).unwrap();
        assert_eq!(bct.blocks.len(), 8);
        let cuts: Vec<&str> = bct.cut_vertices.iter().map(|&v| names[v]).collect();
        let mut cuts = cuts;
        cuts.sort_unstable();
        assert_eq!(cuts, vec!["c1", "c2", "c3", "c4", "p"]);
        assert_eq!(bct.cyclic_blocks().count(), 3);
        let edge_total: usize = bct.blocks.iter().map(|b| b.edges.len()).sum();
        assert_eq!(edge_total, graph.m());
    }

    #[test]
    fn rejects_edgeless_and_disconnected() {
        assert!(decompose(&Graph::empty(1)).is_err());
        assert!(decompose(&g(4, &[(0, 1), (2, 3)])).is_err());
    }
}

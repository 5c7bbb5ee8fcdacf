use std::collections::BTreeMap;

use crate::error::{Error, Result, Violation};
use crate::graph::Graph;

use super::blocks::BlockCutTree;

/// A breadth-first ordering of the blocks from a cyclic root block.
///
/// Children of one cut vertex are contiguous, bridges ahead of cyclic blocks,
/// and a block never precedes one that is closer to the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOrdering {
    pub root_block: usize,
    pub sequence: Vec<usize>,
    /// Cut vertex through which each block hangs off its parent; `None` for the root.
    pub parent_cut_vertex: Vec<Option<usize>>,
    /// Distance of each block from the root in the block-cut tree, counted in blocks.
    pub depth: Vec<usize>,
    /// Children of each cut vertex in sequence order.
    pub children: BTreeMap<usize, Vec<usize>>,
}

impl BlockOrdering {
    pub fn position(&self, block: usize) -> usize {
        self.sequence
            .iter()
            .position(|&b| b == block)
            .expect("block in ordering")
    }
}

/// Orders the blocks of `g`. The root is the cyclic block holding
/// `preferred_root_vertex` when given, otherwise the cyclic block with the
/// smallest vertex.
pub fn order_blocks(
    g: &Graph,
    bct: &BlockCutTree,
    preferred_root_vertex: Option<usize>,
) -> Result<BlockOrdering> {
    let cyclic: Vec<usize> = bct.cyclic_blocks().collect();
    if cyclic.is_empty() {
        return Err(Error::Precondition {
            context: "block ordering needs a cyclic block (all-bridge graph)",
            violations: vec![Violation::Degenerate {
                vertices: g.n(),
                edges: g.m(),
            }],
        });
    }
    let root_block = match preferred_root_vertex {
        Some(u) => {
            g.check_vertex(u)?;
            *bct.vertex_blocks[u]
                .iter()
                .filter(|&&b| !bct.blocks[b].is_bridge())
                .min_by_key(|&&b| bct.blocks[b].min_vertex())
                .ok_or_else(|| Error::Argument(format!("vertex {u} lies in no cyclic block")))?
        }
        None => *cyclic
            .iter()
            .min_by_key(|&&b| bct.blocks[b].min_vertex())
            .expect("nonempty"),
    };

    let nb = bct.blocks.len();
    let mut parent_cut_vertex = vec![None; nb];
    let mut depth = vec![usize::MAX; nb];
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut sequence = vec![root_block];
    depth[root_block] = 0;

    let mut level = vec![root_block];
    while !level.is_empty() {
        // (group key, cut vertex, ordered children)
        let mut groups: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for &b in &level {
            for &v in &bct.blocks[b].vertices {
                if Some(v) == parent_cut_vertex[b] || !bct.is_cut_vertex(v) {
                    continue;
                }
                let mut kids: Vec<usize> = bct.vertex_blocks[v]
                    .iter()
                    .copied()
                    .filter(|&c| c != b)
                    .collect();
                kids.sort_by_key(|&c| {
                    let blk = &bct.blocks[c];
                    (!blk.is_bridge(), blk.min_vertex_except(v))
                });
                let key = kids
                    .iter()
                    .map(|&c| bct.blocks[c].min_vertex())
                    .min()
                    .unwrap_or(v);
                for &c in &kids {
                    parent_cut_vertex[c] = Some(v);
                    depth[c] = depth[b] + 1;
                }
                groups.push((key, v, kids));
            }
        }
        groups.sort_by_key(|&(key, v, _)| (key, v));
        let mut next = Vec::new();
        for (_, v, kids) in groups {
            sequence.extend(&kids);
            next.extend(&kids);
            children.insert(v, kids);
        }
        level = next;
    }

    if sequence.len() != nb {
        return Err(Error::internal(format!(
            "ordering reached {} of {nb} blocks",
            sequence.len()
        )));
    }
    Ok(BlockOrdering {
        root_block,
        sequence,
        parent_cut_vertex,
        depth,
        children,
    })
}

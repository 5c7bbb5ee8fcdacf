//! Block decomposition, the leaf / cut-vertex / bridge taxonomy, and the
//! block ordering that drives factor construction.

mod blocks;
mod classify;
mod order;

pub use blocks::{decompose, Block, BlockCutTree, BlockKind};
pub use classify::{classify, StructureClassification};
pub use order::{order_blocks, BlockOrdering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph with some leaves removed, plus the maps between the two id spaces.
#[derive(Debug, Clone)]
pub struct Stripped {
    pub graph: Graph,
    /// Host id of every vertex of `graph`.
    pub old_of_new: Vec<usize>,
    /// Id in `graph` of every host vertex, `None` if removed.
    pub new_of_old: Vec<Option<usize>>,
}

/// Deletes the given leaves. Every removed vertex must have degree 1 and no
/// two removed vertices may be adjacent.
pub fn strip(g: &Graph, removal: &[usize]) -> Result<Stripped> {
    let mut removed = vec![false; g.n()];
    for &v in removal {
        g.check_vertex(v)?;
        if !g.is_leaf(v) {
            return Err(Error::Argument(format!("vertex {v} is not a leaf")));
        }
        removed[v] = true;
    }
    for &v in removal {
        if removed[g.neighbors(v)[0]] {
            return Err(Error::Argument(format!(
                "removed vertices {v} and {} are adjacent",
                g.neighbors(v)[0]
            )));
        }
    }
    let keep: Vec<usize> = (0..g.n()).filter(|&v| !removed[v]).collect();
    let (graph, old_of_new) = g.induced(&keep)?;
    let mut new_of_old = vec![None; g.n()];
    for (new, &old) in old_of_new.iter().enumerate() {
        new_of_old[old] = Some(new);
    }
    Ok(Stripped {
        graph,
        old_of_new,
        new_of_old,
    })
}

/// Classification and block order in caller labels, for JSON output.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassificationReport {
    pub leaves: Vec<u64>,
    pub bad_leaves: Vec<u64>,
    pub trivial_cut_vertices: Vec<u64>,
    pub nontrivial_cut_vertices: Vec<u64>,
    pub bridges: BridgeReport,
    /// Blocks in order, each as its vertex labels; empty when the graph has
    /// no cyclic block to root the ordering.
    pub block_order: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BridgeReport {
    pub trivial: Vec<[u64; 2]>,
    pub bad: Vec<[u64; 2]>,
    pub nontrivial: Vec<[u64; 2]>,
}

impl ClassificationReport {
    pub fn new(
        g: &Graph,
        bct: &BlockCutTree,
        cls: &StructureClassification,
        ordering: Option<&BlockOrdering>,
    ) -> Self {
        let labels = |set: &std::collections::BTreeSet<usize>| -> Vec<u64> {
            set.iter().map(|&v| g.label(v)).collect()
        };
        let edges = |set: &std::collections::BTreeSet<crate::graph::Edge>| -> Vec<[u64; 2]> {
            set.iter().map(|e| [g.label(e.lo()), g.label(e.hi())]).collect()
        };
        ClassificationReport {
            leaves: labels(&cls.leaves),
            bad_leaves: labels(&cls.bad_leaves),
            trivial_cut_vertices: labels(&cls.trivial_cut_vertices),
            nontrivial_cut_vertices: labels(&cls.nontrivial_cut_vertices),
            bridges: BridgeReport {
                trivial: edges(&cls.trivial_bridges),
                bad: edges(&cls.bad_bridges),
                nontrivial: edges(&cls.nontrivial_bridges),
            },
            block_order: ordering
                .map(|o| {
                    o.sequence
                        .iter()
                        .map(|&b| bct.blocks[b].vertices.iter().map(|&v| g.label(v)).collect())
                        .collect()
                })
                .unwrap_or_default(),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Mixed instance: 4-cycle c1 c2 c3 w, pendant x at c1,
    /// y1 y2 at c2, z at c3, bridge c3-p, triangles p q c4 and c4 r t.
    pub(crate) fn mixed_instance() -> (Graph, Vec<&'static str>) {
        let names = vec![
            "c1", "c2", "c3", "w", "x", "y1", "y2", "z", "p", "q", "c4", "r", "t",
        ];
        let edges = [
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (4, 0),
            (1, 5),
            (1, 6),
            (2, 7),
            (2, 8),
            (8, 9),
            (9, 10),
            (8, 10),
            (10, 11),
            (11, 12),
            (10, 12),
        ];
        (Graph::from_edges(13, edges).unwrap(), names)
    }

    #[test]
    fn strip_examples() {
        let star = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let s = strip(&star, &[1, 2, 3, 4]).unwrap();
        assert_eq!((s.graph.n(), s.graph.m()), (1, 0));

        let pend = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        let s = strip(&pend, &[3]).unwrap();
        assert_eq!((s.graph.n(), s.graph.m()), (3, 3));
        assert_eq!(s.new_of_old[3], None);

        let (g, names) = mixed_instance();
        let s = strip(&g, &[4, 5, 6]).unwrap();
        assert_eq!(s.graph.n(), 10);
        let z = s.new_of_old[7].unwrap();
        assert!(s.graph.is_leaf(z));
        assert_eq!(names[s.old_of_new[z]], "z");
    }

    #[test]
    fn strip_rejects_non_leaves() {
        let pend = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        assert!(strip(&pend, &[0]).is_err());
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(strip(&k2, &[0, 1]).is_err());
    }

    #[test]
    fn report_uses_labels() {
        let (g, _) = mixed_instance();
        let g = g.with_labels((100..113).collect()).unwrap();
        let bct = decompose(&g).unwrap();
        let cls = classify(&g, &bct);
        let ord = order_blocks(&g, &bct, None).unwrap();
        let report = ClassificationReport::new(&g, &bct, &cls, Some(&ord));
        assert_eq!(report.bad_leaves, vec![104]);
        assert_eq!(report.block_order.len(), 8);
        let json = serde_json::to_value(&report).unwrap();
        assert!(json.get("badLeaves").is_some());
        assert!(json["bridges"].get("nontrivial").is_some());
        assert!(json.get("trivialCutVertices").is_some());
        assert!(json.get("blockOrder").is_some());
    }
}

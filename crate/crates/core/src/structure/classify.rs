use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Edge, Graph};

use super::blocks::BlockCutTree;

/// Leaf, cut-vertex and bridge labels of a connected graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureClassification {
    pub leaves: BTreeSet<usize>,
    pub bad_leaves: BTreeSet<usize>,
    pub trivial_cut_vertices: BTreeSet<usize>,
    pub nontrivial_cut_vertices: BTreeSet<usize>,
    pub trivial_bridges: BTreeSet<Edge>,
    pub bad_bridges: BTreeSet<Edge>,
    pub nontrivial_bridges: BTreeSet<Edge>,
    /// Adjacent leaves of every trivial cut vertex.
    pub leaf_sets: BTreeMap<usize, Vec<usize>>,
}

impl StructureClassification {
    pub fn is_cut_vertex(&self, v: usize) -> bool {
        self.trivial_cut_vertices.contains(&v) || self.nontrivial_cut_vertices.contains(&v)
    }

    pub fn cut_vertices(&self) -> BTreeSet<usize> {
        self.trivial_cut_vertices
            .union(&self.nontrivial_cut_vertices)
            .copied()
            .collect()
    }
}

/// Labels every vertex and cut-edge of `g`. `bct` must be `decompose(g)`.
pub fn classify(g: &Graph, bct: &BlockCutTree) -> StructureClassification {
    let mut cls = StructureClassification {
        leaves: (0..g.n()).filter(|&v| g.is_leaf(v)).collect(),
        ..Default::default()
    };

    for &y in &bct.cut_vertices {
        let leaf_set: Vec<usize> = g
            .neighbors(y)
            .iter()
            .copied()
            .filter(|&w| g.is_leaf(w))
            .collect();
        if is_cut_after_removing(g, y, &leaf_set) {
            cls.nontrivial_cut_vertices.insert(y);
        } else {
            if let [x] = leaf_set[..] {
                cls.bad_leaves.insert(x);
            }
            cls.trivial_cut_vertices.insert(y);
            cls.leaf_sets.insert(y, leaf_set);
        }
    }

    for block in bct.blocks.iter().filter(|b| b.is_bridge()) {
        let e = block.edges[0];
        let (a, b) = e.ends();
        if cls.leaves.contains(&a) || cls.leaves.contains(&b) {
            cls.trivial_bridges.insert(e);
            if cls.bad_leaves.contains(&a) || cls.bad_leaves.contains(&b) {
                cls.bad_bridges.insert(e);
            }
        } else {
            cls.nontrivial_bridges.insert(e);
        }
    }
    cls
}

/// Whether `y` separates `g - removed`.
fn is_cut_after_removing(g: &Graph, y: usize, removed: &[usize]) -> bool {
    let mut gone = vec![false; g.n()];
    for &v in removed {
        gone[v] = true;
    }
    gone[y] = true;
    let remaining = g.n() - removed.len() - 1;
    let Some(start) = (0..g.n()).find(|&v| !gone[v]) else {
        return false;
    };
    let mut seen = gone;
    seen[start] = true;
    let mut stack = vec![start];
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    reached < remaining
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::blocks::decompose;
    use crate::structure::tests::mixed_instance;

    fn named(names: &[&'static str], set: &BTreeSet<usize>) -> Vec<&'static str> {
        let mut v: Vec<_> = set.iter().map(|&i| names[i]).collect();
        v.sort_unstable();
        v
    }

    fn named_edges(names: &[&'static str], set: &BTreeSet<Edge>) -> Vec<String> {
        let mut v: Vec<String> = set
            .iter()
            .map(|e| {
                let mut pair = [names[e.lo()], names[e.hi()]];
                pair.sort_unstable();
                format!("{}{}", pair[0], pair[1])
            })
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn mixed_instance_labels() {
        let (g, names) = mixed_instance();
        let cls = classify(&g, &decompose(&g).unwrap());
        assert_eq!(named(&names, &cls.trivial_cut_vertices), ["c1", "c2"]);
        // The vertex p where the bridge meets B2 is a cut vertex as well.
        assert_eq!(named(&names, &cls.nontrivial_cut_vertices), ["c3", "c4", "p"]);
        assert_eq!(named(&names, &cls.bad_leaves), ["x"]);
        assert_eq!(named(&names, &cls.leaves), ["x", "y1", "y2", "z"]);
        assert_eq!(named_edges(&names, &cls.bad_bridges), ["c1x"]);
        assert_eq!(
            named_edges(&names, &cls.trivial_bridges),
            ["c1x", "c2y1", "c2y2", "c3z"]
        );
        assert_eq!(named_edges(&names, &cls.nontrivial_bridges), ["c3p"]);
    }

    #[test]
    fn triangle_has_no_labels() {
        let t = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(classify(&t, &decompose(&t).unwrap()), Default::default());
    }

    #[test]
    fn star_center_is_trivial_without_bad_leaves() {
        let s = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let cls = classify(&s, &decompose(&s).unwrap());
        assert_eq!(cls.trivial_cut_vertices, BTreeSet::from([0]));
        assert_eq!(cls.leaves.len(), 3);
        assert!(cls.bad_leaves.is_empty());
        assert_eq!(cls.trivial_bridges.len(), 3);
        assert!(cls.bad_bridges.is_empty());
        assert_eq!(cls.leaf_sets[&0], vec![1, 2, 3]);
    }

    #[test]
    fn pendant_on_triangle_is_bad() {
        let t = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (0, 3)]).unwrap();
        let cls = classify(&t, &decompose(&t).unwrap());
        assert_eq!(cls.bad_leaves, BTreeSet::from([3]));
        assert_eq!(cls.bad_bridges, BTreeSet::from([Edge::new(0, 3)]));
    }
}

//! A family of essentially 2-edge connected graphs whose squares have no
//! [2,2s]-factor, with a counting certificate of that fact.
//!
//! Two graphs `G1 ∋ a` and `G2 ∋ b` are joined by `4s + 1` spokes: a vertex
//! `w_i` adjacent to `a` and `b` carrying a pendant leaf `v_i`, plus one arc
//! between `G1` and `G2`. In the square each `v_i` sees only `w_i`, `a` and
//! `b`, so each needs an edge into `{a, b}`, but `a` and `b` together have
//! room for only `4s` of them.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CounterexampleDescriptor {
    pub s: usize,
    pub hub_a: usize,
    pub hub_b: usize,
    /// `(w_i, v_i)` pairs.
    pub spokes: Vec<(usize, usize)>,
    pub g1_vertices: Vec<usize>,
    pub g2_vertices: Vec<usize>,
    pub arc: Edge,
}

/// An attachment graph and the hub vertex in it.
#[derive(Debug, Clone, Copy)]
pub struct Attachment<'a> {
    pub graph: &'a Graph,
    pub hub: usize,
    /// End of the arc in this graph; defaults to the smallest non-hub vertex.
    pub arc_end: Option<usize>,
}

/// Builds the instance for `s`. Vertices are numbered `G1`, then `G2`, then
/// `w_1, v_1, w_2, v_2, ...`.
pub fn gen_counterexample(
    s: usize,
    g1: Attachment<'_>,
    g2: Attachment<'_>,
) -> Result<(Graph, CounterexampleDescriptor)> {
    if s == 0 {
        return Err(Error::Argument("s must be positive".into()));
    }
    let check = |att: &Attachment<'_>, name: &str| -> Result<usize> {
        let g = att.graph;
        g.check_vertex(att.hub)?;
        if g.m() == 0 || !g.is_connected() || !g.is_essentially_two_edge_connected()? {
            return Err(Error::Argument(format!(
                "{name} must be connected and essentially 2-edge connected"
            )));
        }
        match att.arc_end {
            Some(v) => {
                g.check_vertex(v)?;
                Ok(v)
            }
            None => (0..g.n())
                .find(|&v| v != att.hub)
                .ok_or_else(|| Error::Argument(format!("{name} needs a vertex besides its hub"))),
        }
    };
    let end1 = check(&g1, "G1")?;
    let end2 = check(&g2, "G2")?;

    let (n1, n2) = (g1.graph.n(), g2.graph.n());
    let spokes: Vec<(usize, usize)> = (0..4 * s + 1)
        .map(|i| (n1 + n2 + 2 * i, n1 + n2 + 2 * i + 1))
        .collect();
    let (a, b) = (g1.hub, n1 + g2.hub);
    let arc = Edge::new(end1, n1 + end2);
    let mut edges: Vec<(usize, usize)> = g1.graph.edges().map(|e| e.ends()).collect();
    edges.extend(g2.graph.edges().map(|e| (n1 + e.lo(), n1 + e.hi())));
    for &(w, v) in &spokes {
        edges.extend([(w, a), (w, b), (w, v)]);
    }
    edges.push(arc.ends());
    let n = n1 + n2 + 2 * spokes.len();
    let graph = Graph::from_edges(n, edges)?;

    if !graph.is_essentially_two_edge_connected()? {
        return Err(Error::internal("family instance is not essentially 2-edge connected"));
    }
    if g1.graph.is_two_connected() && g2.graph.is_two_connected() {
        let inner: Vec<usize> = (0..n).filter(|&v| !graph.is_leaf(v)).collect();
        let (core, _) = graph.induced(&inner)?;
        if !core.is_two_connected() {
            return Err(Error::internal("family instance without leaves is not 2-connected"));
        }
    }
    let descriptor = CounterexampleDescriptor {
        s,
        hub_a: a,
        hub_b: b,
        spokes,
        g1_vertices: (0..n1).collect(),
        g2_vertices: (n1..n1 + n2).collect(),
        arc,
    };
    Ok((graph, descriptor))
}

/// The instance with triangles as both attachment graphs, hubs at their
/// first vertex.
pub fn triangle_instance(s: usize) -> Result<(Graph, CounterexampleDescriptor)> {
    let t = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])?;
    let att = Attachment { graph: &t, hub: 0, arc_end: None };
    gen_counterexample(s, att, att)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CountingProof {
    pub s: usize,
    pub leaves: Vec<usize>,
    /// Edges the leaves must send into the hubs.
    pub demand: usize,
    /// Room at the hubs, `2 * 2s`.
    pub capacity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "camelCase")]
pub enum CountingOutcome {
    Proof(CountingProof),
    NotApplicable { reason: String },
}

/// Confirms the structure the counting argument relies on and returns it.
pub fn counting_certificate(g: &Graph, d: &CounterexampleDescriptor) -> CountingOutcome {
    let fail = |reason: String| CountingOutcome::NotApplicable { reason };
    let n = g.n();
    if d.hub_a >= n || d.hub_b >= n || d.hub_a == d.hub_b {
        return fail("hubs are not two distinct vertices".into());
    }
    let mut leaves = Vec::new();
    for &(w, v) in &d.spokes {
        if w >= n || v >= n {
            return fail(format!("spoke ({w}, {v}) out of range"));
        }
        if g.neighbors(v) != [w] {
            return fail(format!("{v} is not a leaf at {w}"));
        }
        let mut reach: BTreeSet<usize> = g.neighbors(v).iter().copied().collect();
        for &x in g.neighbors(v) {
            reach.extend(g.neighbors(x));
        }
        reach.remove(&v);
        let expected = BTreeSet::from([w, d.hub_a, d.hub_b]);
        if reach != expected {
            return fail(format!(
                "leaf {v} sees {reach:?} in the square, expected {expected:?}"
            ));
        }
        leaves.push(v);
    }
    let capacity = 2 * 2 * d.s;
    if leaves.len() <= capacity {
        return fail(format!("{} leaves fit into capacity {capacity}", leaves.len()));
    }
    CountingOutcome::Proof(CountingProof {
        s: d.s,
        demand: leaves.len(),
        leaves,
        capacity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::oracle::{exists_factor, OracleBudget};

    #[test]
    fn triangle_instance_shape() {
        let (g, d) = triangle_instance(1).unwrap();
        assert_eq!((g.n(), g.m()), (16, 22));
        assert_eq!((d.hub_a, d.hub_b, d.arc), (0, 3, Edge::new(1, 4)));
        assert_eq!(d.spokes[0], (6, 7));
        assert_eq!(g.square().m(), 67);
        assert!(g.is_essentially_two_edge_connected().unwrap());
    }

    #[test]
    fn counting_proofs() {
        for s in 1..=5 {
            let (g, d) = triangle_instance(s).unwrap();
            let CountingOutcome::Proof(p) = counting_certificate(&g, &d) else { panic!() };
            assert_eq!((p.demand, p.capacity), (4 * s + 1, 4 * s));
        }
        let (g, _) = triangle_instance(2).unwrap();
        assert_eq!(g.n(), 24);
    }

    #[test]
    fn extra_spoke_edge_voids_the_proof() {
        let (g, d) = triangle_instance(1).unwrap();
        let mut edges: Vec<(usize, usize)> = g.edges().map(|e| e.ends()).collect();
        edges.push((d.spokes[0].0, d.spokes[1].0));
        let g2 = Graph::from_edges(g.n(), edges).unwrap();
        assert!(matches!(counting_certificate(&g2, &d), CountingOutcome::NotApplicable { .. }));
    }

    #[test]
    fn rejects_bad_attachments() {
        let t = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let p4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let ok = Attachment { graph: &t, hub: 0, arc_end: None };
        let bad = Attachment { graph: &p4, hub: 0, arc_end: None };
        assert!(gen_counterexample(1, ok, bad).is_err());
        let out_of_range = Attachment { graph: &t, hub: 7, arc_end: None };
        assert!(gen_counterexample(1, ok, out_of_range).is_err());
        assert!(gen_counterexample(0, ok, ok).is_err());
    }

    #[test]
    fn counting_agrees_with_search_at_s1() {
        let (g, _) = triangle_instance(1).unwrap();
        assert!(exists_factor(&g, 1, OracleBudget::default()).unwrap().is_no());
    }
}

//! Certificate checking.
//!
//! Nothing here calls into the decomposition or construction code: cut
//! vertices, bridges and leaf classes are recomputed by deleting vertices or
//! edges and searching, which is slow but easy to trust.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::factor::{CertificateKind, FactorCertificate};
use crate::graph::{Edge, Graph, Origin};

/// Outcome of checking a factor, with one witness line per failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub pass: bool,
    pub spanning: bool,
    pub connected: bool,
    pub all_even: bool,
    pub max_degree_ok: bool,
    /// Every edge joins vertices at distance 1 or 2 and carries the right tag.
    pub edges_in_square: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub properties: Option<PropertyReport>,
    pub witnesses: Vec<String>,
}

/// Designation properties of a lemma certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    /// Vertices that are not cut vertices have degree 2.
    pub a: bool,
    /// The designated edges at `u` are original.
    pub b: bool,
    /// Cut vertices have degree 4 and two original designated edges, which
    /// are leaf edges at trivial cut vertices.
    pub c: bool,
    /// The pair at `u` shares no edge with any cut-vertex pair.
    pub d: bool,
    /// Cut-vertex pairs are pairwise disjoint.
    pub e: bool,
}

impl PropertyReport {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d && self.e
    }
}

/// Vertex label for messages; ids outside the graph are shown with `#`.
fn vl(g: &Graph, v: usize) -> String {
    if v < g.n() {
        g.label(v).to_string()
    } else {
        format!("#{v}")
    }
}

fn el(g: &Graph, e: Edge) -> String {
    format!("{}-{}", vl(g, e.lo()), vl(g, e.hi()))
}

/// Checks that `edges` form a connected spanning even subgraph of `g`'s
/// square with degrees at most `2s`.
pub fn verify_factor(g: &Graph, edges: &[(Edge, Origin)], s: usize) -> VerificationReport {
    let n = g.n();
    let mut w = Vec::new();
    let mut deg = vec![0usize; n];
    let mut in_square = true;
    let mut seen = BTreeSet::new();
    for &(e, origin) in edges {
        let (u, v) = e.ends();
        if u >= n || v >= n || u == v {
            in_square = false;
            w.push(format!("edge {}-{} is not a pair of host vertices", vl(g, u), vl(g, v)));
            continue;
        }
        if !seen.insert(e) {
            in_square = false;
            w.push(format!("edge {} listed twice", el(g, e)));
            continue;
        }
        deg[u] += 1;
        deg[v] += 1;
        match square_origin(g, u, v) {
            None => {
                in_square = false;
                w.push(format!("edge {} joins vertices at distance > 2", el(g, e)));
            }
            Some(actual) if actual != origin => {
                in_square = false;
                w.push(format!("edge {} tagged {origin:?} but is {actual:?}", el(g, e)));
            }
            Some(_) => {}
        }
    }

    let spanning = n > 0 && deg.iter().all(|&d| d > 0);
    for v in (0..n).filter(|&v| deg[v] == 0) {
        w.push(format!("vertex {} is not covered", vl(g, v)));
    }
    let all_even = deg.iter().all(|&d| d % 2 == 0);
    for v in (0..n).filter(|&v| deg[v] % 2 == 1) {
        w.push(format!("vertex {} has odd degree {}", vl(g, v), deg[v]));
    }
    let max_degree_ok = deg.iter().all(|&d| d <= 2 * s);
    for v in (0..n).filter(|&v| deg[v] > 2 * s) {
        w.push(format!("vertex {} has degree {} > {}", vl(g, v), deg[v], 2 * s));
    }
    let connected = {
        let valid: Vec<Edge> = seen.iter().copied().collect();
        let parts = count_components(n, &valid, &[]);
        if parts != 1 {
            w.push(format!("factor has {parts} components"));
        }
        parts == 1
    };
    VerificationReport {
        pass: spanning && connected && all_even && max_degree_ok && in_square,
        spanning,
        connected,
        all_even,
        max_degree_ok,
        edges_in_square: in_square,
        properties: None,
        witnesses: w,
    }
}

/// Checks a certificate against `g` at `s = 2`, plus the designation
/// properties when the certificate is of lemma kind.
pub fn verify_certificate(g: &Graph, cert: &FactorCertificate) -> VerificationReport {
    let mut report = verify_factor(g, &cert.tagged_edges(), 2);
    if cert.host != *g {
        report.pass = false;
        report.witnesses.push("certificate host differs from the graph".into());
    }
    if cert.kind == CertificateKind::Lemma {
        let props = check_properties(g, cert, &mut report.witnesses);
        report.pass &= props.all();
        report.properties = Some(props);
    }
    report
}

fn check_properties(g: &Graph, cert: &FactorCertificate, w: &mut Vec<String>) -> PropertyReport {
    let n = g.n();
    let deg = {
        let mut d = vec![0usize; n];
        for e in cert.edges.keys() {
            if e.hi() < n {
                d[e.lo()] += 1;
                d[e.hi()] += 1;
            }
        }
        d
    };
    let cut: BTreeSet<usize> = (0..n).filter(|&v| is_cut_vertex(g, v)).collect();
    let bridges: BTreeSet<Edge> = g.edges().filter(|&e| is_bridge(g, e)).collect();
    let leaves: BTreeSet<usize> = (0..n).filter(|&v| g.degree(v) == 1).collect();
    let trivial_bridge = |e: &Edge| {
        bridges.contains(e) && (leaves.contains(&e.lo()) || leaves.contains(&e.hi()))
    };
    let in_factor = |e: &Edge| cert.edges.contains_key(e);

    let mut a = true;
    for v in (0..n).filter(|v| !cut.contains(v)) {
        if deg[v] != 2 {
            a = false;
            w.push(format!("(a) vertex {} is not a cut vertex but has degree {}", vl(g, v), deg[v]));
        }
    }

    let mut b = true;
    if let Some(d) = cert.u_designation {
        let u = d.vertex;
        if u >= n || cut.contains(&u) || leaves.contains(&u) {
            b = false;
            w.push(format!("(b) vertex {} is a cut vertex, a leaf, or absent", vl(g, u)));
        }
        if d.edges[0] == d.edges[1] {
            b = false;
            w.push(format!("(b) designated edges at {} coincide", vl(g, u)));
        }
        for e in d.edges {
            if !e.contains(u) || !in_factor(&e) || !g.contains_edge(e) {
                b = false;
                w.push(format!("(b) designated edge {} at {} is not an original factor edge there", el(g, e), vl(g, u)));
            }
        }
    }

    let mut c = true;
    for &v in &cut {
        if deg[v] != 4 {
            c = false;
            w.push(format!("(c) cut vertex {} has degree {}", vl(g, v), deg[v]));
        }
        let Some(pair) = cert.cut_designations.get(&v) else {
            c = false;
            w.push(format!("(c) cut vertex {} has no designated edges", vl(g, v)));
            continue;
        };
        if pair[0] == pair[1] {
            c = false;
            w.push(format!("(c) designated edges at {} coincide", vl(g, v)));
        }
        let trivial = is_trivial_cut_vertex(g, v);
        for e in pair {
            if !e.contains(v) || !in_factor(e) || !g.contains_edge(*e) {
                c = false;
                w.push(format!("(c) designated edge {} at {} is not an original factor edge there", el(g, *e), vl(g, v)));
            } else if trivial && !trivial_bridge(e) {
                c = false;
                w.push(format!("(c) designated edge {} at trivial cut vertex {} is not a leaf bridge", el(g, *e), vl(g, v)));
            }
        }
    }
    for &v in cert.cut_designations.keys() {
        if !cut.contains(&v) {
            c = false;
            w.push(format!("(c) vertex {} carries a designation but is not a cut vertex", vl(g, v)));
        }
    }

    let mut d = true;
    if let Some(ud) = cert.u_designation {
        for (&v, pair) in &cert.cut_designations {
            for e in ud.edges.iter().filter(|e| pair.contains(e)) {
                d = false;
                w.push(format!("(d) edge {} is designated at {} and at {}", el(g, *e), vl(g, ud.vertex), vl(g, v)));
            }
        }
    }

    let mut e = true;
    let mut owner: BTreeMap<Edge, usize> = BTreeMap::new();
    for (&v, pair) in &cert.cut_designations {
        for &f in pair {
            if let Some(&other) = owner.get(&f) {
                if other != v {
                    e = false;
                    w.push(format!("(e) edge {} is designated at {} and at {}", el(g, f), vl(g, other), vl(g, v)));
                }
            }
            owner.insert(f, v);
        }
    }
    PropertyReport { a, b, c, d, e }
}

/// `Some(origin)` when `u` and `v` are at distance 1 or 2.
fn square_origin(g: &Graph, u: usize, v: usize) -> Option<Origin> {
    if g.neighbors(u).contains(&v) {
        return Some(Origin::Original);
    }
    g.neighbors(u)
        .iter()
        .any(|w| g.neighbors(*w).contains(&v))
        .then_some(Origin::Square)
}

/// Components of the graph on `0..n` with `edges`, ignoring `dead` vertices.
fn count_components(n: usize, edges: &[Edge], dead: &[usize]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for e in edges {
        adj[e.lo()].push(e.hi());
        adj[e.hi()].push(e.lo());
    }
    let mut seen = vec![false; n];
    for &v in dead {
        seen[v] = true;
    }
    let mut parts = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        parts += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &x in &adj[v] {
                if !seen[x] {
                    seen[x] = true;
                    stack.push(x);
                }
            }
        }
    }
    parts
}

fn edges_of(g: &Graph) -> Vec<Edge> {
    g.edges().collect()
}

fn components_without(g: &Graph, dead: &[usize]) -> usize {
    let live: Vec<Edge> = edges_of(g)
        .into_iter()
        .filter(|e| !dead.contains(&e.lo()) && !dead.contains(&e.hi()))
        .collect();
    count_components(g.n(), &live, dead)
}

fn is_cut_vertex(g: &Graph, v: usize) -> bool {
    components_without(g, &[v]) > components_without(g, &[])
}

fn is_bridge(g: &Graph, e: Edge) -> bool {
    let rest: Vec<Edge> = edges_of(g).into_iter().filter(|&f| f != e).collect();
    count_components(g.n(), &rest, &[]) > count_components(g.n(), &edges_of(g), &[])
}

/// A cut vertex that stops being one once its adjacent leaves are deleted.
fn is_trivial_cut_vertex(g: &Graph, v: usize) -> bool {
    let mut dead: Vec<usize> = g
        .neighbors(v)
        .iter()
        .copied()
        .filter(|&w| g.degree(w) == 1)
        .collect();
    if dead.is_empty() {
        return false;
    }
    let before = components_without(g, &dead);
    dead.push(v);
    components_without(g, &dead) <= before
}

/// Checks a vertex sequence as a constrained Hamiltonian cycle of `block`'s
/// square: both cycle edges at `v1` original and, when `v2` is given, one
/// original edge at `v2` that is not an edge at `v1` used for that purpose.
pub fn check_cycle_witness(
    block: &Graph,
    cycle: &[usize],
    v1: usize,
    v2: Option<usize>,
) -> Result<(), String> {
    let n = block.n();
    if cycle.len() != n || n < 3 {
        return Err(format!("cycle has {} vertices, block has {n}", cycle.len()));
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(format!("vertex {v} repeated or out of range"));
        }
    }
    let edges: Vec<Edge> = (0..n).map(|i| Edge::new(cycle[i], cycle[(i + 1) % n])).collect();
    for e in &edges {
        if square_origin(block, e.lo(), e.hi()).is_none() {
            return Err(format!("{e} is not an edge of the square"));
        }
    }
    let at = |v: usize| -> Vec<Edge> { edges.iter().copied().filter(|e| e.contains(v)).collect() };
    let at_v1 = at(v1);
    if at_v1.iter().any(|e| !block.contains_edge(*e)) {
        return Err(format!("an edge at v1 = {v1} is not original"));
    }
    if let Some(v2) = v2 {
        // When v1 and v2 are consecutive the shared edge does not count.
        let ok = at(v2)
            .into_iter()
            .any(|e| block.contains_edge(e) && !at_v1.contains(&e));
        if !ok {
            return Err(format!("no admissible original edge at v2 = {v2}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::lemma_factor;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn tagged(graph: &Graph) -> Vec<(Edge, Origin)> {
        graph.edges().map(|e| (e, Origin::Original)).collect()
    }

    fn bowtie() -> Graph {
        g(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    }

    #[test]
    fn c4_passes_at_s1() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let r = verify_factor(&c4, &tagged(&c4), 1);
        assert!(r.pass, "{:?}", r.witnesses);
    }

    #[test]
    fn bowtie_needs_s2() {
        let b = bowtie();
        let r1 = verify_factor(&b, &tagged(&b), 1);
        assert!(!r1.pass && !r1.max_degree_ok && r1.connected && r1.all_even);
        assert!(verify_factor(&b, &tagged(&b), 2).pass);
    }

    #[test]
    fn detects_far_edges_and_wrong_tags() {
        let p4 = g(4, &[(0, 1), (1, 2), (2, 3)]);
        let r = verify_factor(&p4, &[(Edge::new(0, 3), Origin::Square)], 2);
        assert!(!r.edges_in_square);
        let r = verify_factor(&p4, &[(Edge::new(0, 2), Origin::Original)], 2);
        assert!(!r.edges_in_square);
    }

    #[test]
    fn brute_force_structure() {
        let b = bowtie();
        assert!(is_cut_vertex(&b, 2));
        assert!(!is_cut_vertex(&b, 0));
        assert!(!is_bridge(&b, Edge::new(0, 1)));
        let k13 = g(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(is_trivial_cut_vertex(&k13, 0));
        let (mixed, _) = crate::structure::tests::mixed_instance();
        let trivial: Vec<usize> = (0..mixed.n()).filter(|&v| is_trivial_cut_vertex(&mixed, v)).collect();
        assert_eq!(trivial, vec![0, 1]);
    }

    #[test]
    fn lemma_certificates_pass() {
        let cert = lemma_factor(&bowtie(), Some(0)).unwrap();
        let r = verify_certificate(&bowtie(), &cert);
        assert!(r.pass, "{:?}", r.witnesses);
        assert!(r.properties.unwrap().all());

        let k14 = g(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let cert = lemma_factor(&k14, None).unwrap();
        let r = verify_certificate(&k14, &cert);
        assert!(r.pass, "{:?}", r.witnesses);
    }

    #[test]
    fn square_only_u_edge_fails_b() {
        let b = bowtie();
        let mut cert = lemma_factor(&b, Some(0)).unwrap();
        let mut d = cert.u_designation.unwrap();
        d.edges[0] = Edge::new(0, 3);
        cert.u_designation = Some(d);
        let r = verify_certificate(&b, &cert);
        assert!(!r.pass);
        assert!(!r.properties.unwrap().b);
    }

    #[test]
    fn shared_designations_fail_d_and_e() {
        // Two bowties glued: 0-1-2, 2-3-4, 4-5-6; cut vertices 2 and 4.
        let chain = g(7, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5), (5, 6), (4, 6)]);
        let mut cert = lemma_factor(&chain, Some(0)).unwrap();
        assert!(verify_certificate(&chain, &cert).pass);
        let pair4 = cert.cut_designations[&4];
        cert.cut_designations.insert(2, [Edge::new(2, 3), Edge::new(2, 4)]);
        cert.cut_designations.insert(4, [Edge::new(2, 4), pair4[1]]);
        let p = verify_certificate(&chain, &cert).properties.unwrap();
        assert!(!p.e);
    }

    #[test]
    fn cycle_witness_checks() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(check_cycle_witness(&c4, &[0, 1, 2, 3], 0, Some(2)).is_ok());
        assert!(check_cycle_witness(&c4, &[0, 2, 1, 3], 0, None).is_err());
        assert!(check_cycle_witness(&c4, &[0, 1, 2], 0, None).is_err());
        let k4 = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert!(check_cycle_witness(&k4, &[0, 1, 2, 3], 0, Some(1)).is_ok());
    }
}

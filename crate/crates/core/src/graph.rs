//! Simple undirected graphs over dense vertex ids, plus the handful of
//! connectivity queries every other module leans on.
//!
//! Vertices are `0..n`. Each vertex also carries the integer label it had in
//! the input file so that anything written back out speaks the caller's ids.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge stored as `(min, max)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Edge(usize, usize);

impl Edge {
    /// Panics if `u == v`; loops never exist in a simple graph.
    pub fn new(u: usize, v: usize) -> Self {
        assert_ne!(u, v, "self-loop {u}-{u}");
        if u < v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn lo(self) -> usize {
        self.0
    }

    pub fn hi(self) -> usize {
        self.1
    }

    pub fn ends(self) -> (usize, usize) {
        (self.0, self.1)
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`.
    pub fn other(self, v: usize) -> usize {
        debug_assert!(self.contains(v));
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = String;

    fn try_from([u, v]: [usize; 2]) -> std::result::Result<Self, Self::Error> {
        if u == v {
            Err(format!("self-loop {u}-{v}"))
        } else {
            Ok(Edge::new(u, v))
        }
    }
}

/// Whether an edge of a square comes from the underlying graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Origin {
    Original,
    Square,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` isolated vertices labelled `0..n`.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            labels: (0..n as u64).collect(),
            edge_count: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Argument(format!(
                    "edge {u}-{v} out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Argument(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
            edge_count += 1;
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Argument(format!("parallel edge at {v}")));
            }
        }
        Ok(Graph {
            adj,
            labels: (0..n as u64).collect(),
            edge_count,
        })
    }

    /// Replaces the I/O labels. Labels must be distinct.
    pub fn with_labels(mut self, labels: Vec<u64>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::Argument(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        let distinct: BTreeSet<_> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(Error::Argument("duplicate vertex labels".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.has_edge(e.lo(), e.hi())
    }

    /// Tag for an edge of this graph's square.
    pub fn origin_of(&self, e: Edge) -> Origin {
        if self.contains_edge(e) {
            Origin::Original
        } else {
            Origin::Square
        }
    }

    /// Edges in canonical `(min, max)` order, sorted.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| Edge(u, v))
        })
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn vertex_with_label(&self, label: u64) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.degree(v) == 1
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "vertex {v} out of range for {} vertices",
                self.n()
            )))
        }
    }

    /// The graph on the same vertices joining every pair at distance 1 or 2.
    pub fn square(&self) -> Graph {
        let n = self.n();
        let mut mark = vec![usize::MAX; n];
        let mut adj = Vec::with_capacity(n);
        let mut twice_edges = 0;
        for v in 0..n {
            mark[v] = v;
            let mut list = Vec::new();
            for &w in &self.adj[v] {
                if mark[w] != v {
                    mark[w] = v;
                    list.push(w);
                }
                for &x in &self.adj[w] {
                    if mark[x] != v {
                        mark[x] = v;
                        list.push(x);
                    }
                }
            }
            list.sort_unstable();
            twice_edges += list.len();
            adj.push(list);
        }
        Graph {
            adj,
            labels: self.labels.clone(),
            edge_count: twice_edges / 2,
        }
    }

    /// BFS distances from `src`; `None` marks unreachable vertices.
    pub fn distances_from(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap_or(0);
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path length, `None` when `u` and `v` lie in different components.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.distances_from(u)[v])
    }

    /// Component index per vertex, numbered in order of smallest member.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut next = 0;
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    pub fn bridges(&self) -> Vec<Edge> {
        LowLink::compute(self).bridges
    }

    pub fn articulation_points(&self) -> Vec<usize> {
        LowLink::compute(self).cut_vertices
    }

    /// Connected, at least two vertices, and no cut-edge.
    pub fn is_two_edge_connected(&self) -> bool {
        self.n() >= 2 && self.is_connected() && self.bridges().is_empty()
    }

    /// Connected, at least three vertices, and no cut vertex.
    pub fn is_two_connected(&self) -> bool {
        self.n() >= 3 && self.is_connected() && self.articulation_points().is_empty()
    }

    /// No single edge deletion leaves two components that both contain an edge.
    pub fn is_essentially_two_edge_connected(&self) -> Result<bool> {
        if !self.is_connected() {
            return Err(Error::Argument(
                "essential edge connectivity needs a connected graph".into(),
            ));
        }
        for bridge in self.bridges() {
            // A side of a bridge in a connected graph is nontrivial iff it has
            // at least two vertices.
            let side = self.side_of(bridge);
            let small = side.iter().filter(|&&b| b).count();
            if small >= 2 && self.n() - small >= 2 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Vertices reachable from `e.lo()` without crossing `e`.
    fn side_of(&self, e: Edge) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        seen[e.lo()] = true;
        let mut stack = vec![e.lo()];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if Edge::new(v, w) != e && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Subgraph induced by `keep` (any order; duplicates are rejected).
    /// Returns the subgraph and the new-to-old vertex map.
    pub fn induced(&self, keep: &[usize]) -> Result<(Graph, Vec<usize>)> {
        let mut new_id = vec![usize::MAX; self.n()];
        let mut old = keep.to_vec();
        old.sort_unstable();
        for (i, &v) in old.iter().enumerate() {
            self.check_vertex(v)?;
            if new_id[v] != usize::MAX {
                return Err(Error::Argument(format!("vertex {v} listed twice")));
            }
            new_id[v] = i;
        }
        let mut adj = Vec::with_capacity(old.len());
        let mut twice = 0;
        for &v in &old {
            let list: Vec<usize> = self.adj[v]
                .iter()
                .filter(|&&w| new_id[w] != usize::MAX)
                .map(|&w| new_id[w])
                .collect();
            twice += list.len();
            adj.push(list);
        }
        let labels = old.iter().map(|&v| self.labels[v]).collect();
        Ok((
            Graph {
                adj,
                labels,
                edge_count: twice / 2,
            },
            old,
        ))
    }

    /// One `u v` line per edge, using labels, sorted canonically by dense id.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in self.edges() {
            out.push_str(&format!("{} {}\n", self.labels[e.lo()], self.labels[e.hi()]));
        }
        out
    }

    /// Edges as label pairs, each `(min, max)`, sorted.
    pub fn labelled_edges(&self) -> Vec<[u64; 2]> {
        let mut edges: Vec<[u64; 2]> = self
            .edges()
            .map(|e| {
                let (a, b) = (self.labels[e.lo()], self.labels[e.hi()]);
                [a.min(b), a.max(b)]
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n(),
            edges: self.labelled_edges(),
        }
    }

    /// DOT text for the graph itself.
    pub fn to_dot(&self) -> String {
        let edges: Vec<(Edge, bool)> = self.edges().map(|e| (e, false)).collect();
        self.dot_with(&edges)
    }

    /// DOT text over this graph's vertices for an arbitrary edge list;
    /// edges flagged `true` are drawn dashed.
    pub fn dot_with(&self, edges: &[(Edge, bool)]) -> String {
        let mut sorted = edges.to_vec();
        sorted.sort_unstable();
        let mut out = String::from("graph G {\n");
        for v in 0..self.n() {
            out.push_str(&format!("  {};\n", self.labels[v]));
        }
        for (e, dashed) in sorted {
            let style = if dashed { " [style=dashed]" } else { "" };
            out.push_str(&format!(
                "  {} -- {}{};\n",
                self.labels[e.lo()],
                self.labels[e.hi()],
                style
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// JSON shape of a graph: vertex count and label pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[u64; 2]>,
}

impl GraphJson {
    /// Rebuilds a graph; vertices get dense ids in first-appearance order.
    /// Vertices that appear in no edge cannot be recovered and are dropped
    /// unless the labels are exactly `0..n`.
    pub fn to_graph(&self) -> Result<Graph> {
        let identity = self
            .edges
            .iter()
            .flatten()
            .all(|&l| (l as usize) < self.n);
        if identity {
            let g = Graph::from_edges(
                self.n,
                self.edges.iter().map(|&[u, v]| (u as usize, v as usize)),
            )?;
            return Ok(g);
        }
        let mut builder = LabelledBuilder::default();
        for (i, &[u, v]) in self.edges.iter().enumerate() {
            builder.push(u, v, i + 1)?;
        }
        builder.finish()
    }
}

/// Accumulates label pairs and assigns dense ids by first appearance.
#[derive(Default)]
struct LabelledBuilder {
    ids: HashMap<u64, usize>,
    labels: Vec<u64>,
    edges: Vec<(usize, usize)>,
    seen: BTreeSet<Edge>,
}

impl LabelledBuilder {
    fn id(&mut self, label: u64) -> usize {
        *self.ids.entry(label).or_insert_with(|| {
            self.labels.push(label);
            self.labels.len() - 1
        })
    }

    fn push(&mut self, a: u64, b: u64, line: usize) -> Result<()> {
        if a == b {
            return Err(Error::Format {
                line,
                message: format!("self-loop {a} {b}"),
            });
        }
        let (u, v) = (self.id(a), self.id(b));
        if !self.seen.insert(Edge::new(u, v)) {
            return Err(Error::Format {
                line,
                message: format!("duplicate edge {a} {b}"),
            });
        }
        self.edges.push((u, v));
        Ok(())
    }

    fn finish(self) -> Result<Graph> {
        let n = self.labels.len();
        Graph::from_edges(n, self.edges)?.with_labels(self.labels)
    }
}

/// Parses `u v` lines. `#` lines and blank lines are skipped; ids are densified
/// in order of first appearance.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut builder = LabelledBuilder::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Format {
                line: i + 1,
                message: format!("expected two vertex ids, found {}", tokens.len()),
            });
        }
        let mut ids = [0u64; 2];
        for (slot, tok) in ids.iter_mut().zip(&tokens) {
            *slot = tok.parse().map_err(|_| Error::Format {
                line: i + 1,
                message: format!("not a non-negative integer: {tok:?}"),
            })?;
        }
        builder.push(ids[0], ids[1], i + 1)?;
    }
    builder.finish()
}

/// Bridges and articulation points from one iterative DFS.
struct LowLink {
    bridges: Vec<Edge>,
    cut_vertices: Vec<usize>,
}

impl LowLink {
    fn compute(g: &Graph) -> Self {
        let n = g.n();
        let mut order = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut is_cut = vec![false; n];
        let mut bridges = Vec::new();
        let mut timer = 0;
        for root in 0..n {
            if order[root] != usize::MAX {
                continue;
            }
            order[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            // (vertex, parent, next neighbor index)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            while let Some(frame) = stack.last_mut() {
                let (v, parent, idx) = *frame;
                if idx < g.adj[v].len() {
                    frame.2 += 1;
                    let w = g.adj[v][idx];
                    if w == parent {
                        continue;
                    }
                    if order[w] == usize::MAX {
                        order[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, v, 0));
                    } else {
                        low[v] = low[v].min(order[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] > order[parent] {
                            bridges.push(Edge::new(parent, v));
                        }
                        if parent != root && low[v] >= order[parent] {
                            is_cut[parent] = true;
                        }
                    }
                }
            }
            if root_children >= 2 {
                is_cut[root] = true;
            }
        }
        bridges.sort_unstable();
        LowLink {
            bridges,
            cut_vertices: (0..n).filter(|&v| is_cut[v]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn bowtie() -> Graph {
        g(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    }

    #[test]
    fn parses_a_path() {
        let p = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(p.m(), 2);
    }

    #[test]
    fn parse_rejects_loops_duplicates_and_junk() {
        assert!(matches!(parse_edge_list("0 0"), Err(Error::Format { line: 1, .. })));
        assert!(matches!(
            parse_edge_list("0 1\n0 1"),
            Err(Error::Format { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1\n1 0"),
            Err(Error::Format { line: 2, .. })
        ));
        assert!(parse_edge_list("0 x").is_err());
        assert!(parse_edge_list("0 -1").is_err());
        assert!(parse_edge_list("0 1 2").is_err());
    }

    #[test]
    fn parse_skips_comments_and_densifies_in_first_appearance_order() {
        let p = parse_edge_list("# header\n\n  7 3\n# mid\n3 10\n").unwrap();
        assert_eq!(p.labels(), &[7, 3, 10]);
        assert!(p.has_edge(0, 1));
        assert!(p.has_edge(1, 2));
        assert_eq!(p.to_edge_list(), "7 3\n3 10\n");
    }

    #[test]
    fn square_examples() {
        let path = g(3, &[(0, 1), (1, 2)]);
        let sq = path.square();
        assert_eq!(sq.m(), 3);
        assert!(sq.has_edge(0, 2));

        let star = g(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(star.square().m(), 6);

        let c6 = g(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let sq = c6.square();
        assert!((0..6).all(|v| sq.degree(v) == 4));
        assert!(sq.has_edge(0, 2) && sq.has_edge(0, 4) && !sq.has_edge(0, 3));
    }

    #[test]
    fn distance_examples() {
        let tri = g(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(tri.distance(0, 2).unwrap(), Some(1));
        let path = g(3, &[(0, 1), (1, 2)]);
        assert_eq!(path.distance(0, 2).unwrap(), Some(2));
        let two = g(4, &[(0, 1), (2, 3)]);
        assert_eq!(two.distance(0, 3).unwrap(), None);
        assert!(two.distance(0, 9).is_err());
    }

    #[test]
    fn two_edge_connectivity_examples() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(c4.is_two_edge_connected());
        assert!(!g(3, &[(0, 1), (1, 2)]).is_two_edge_connected());
        assert!(bowtie().is_two_edge_connected());
        assert!(!bowtie().is_two_connected());
    }

    #[test]
    fn essential_two_edge_connectivity_examples() {
        let star = g(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(star.is_essentially_two_edge_connected().unwrap());
        let p4 = g(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(!p4.is_essentially_two_edge_connected().unwrap());
        assert!(g(4, &[(0, 1), (2, 3)])
            .is_essentially_two_edge_connected()
            .is_err());
    }

    #[test]
    fn lowlink_on_bowtie_and_path() {
        assert_eq!(bowtie().articulation_points(), vec![2]);
        assert!(bowtie().bridges().is_empty());
        let p = g(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(p.articulation_points(), vec![1, 2]);
        assert_eq!(p.bridges().len(), 3);
    }

    #[test]
    fn induced_keeps_labels() {
        let p = parse_edge_list("5 6\n6 7\n7 5\n7 8").unwrap();
        let (sub, map) = p.induced(&[0, 1, 2]).unwrap();
        assert_eq!(sub.m(), 3);
        assert_eq!(map, vec![0, 1, 2]);
        assert_eq!(sub.labels(), &[5, 6, 7]);
    }

    #[test]
    fn json_round_trip_with_sparse_labels() {
        let p = parse_edge_list("10 20\n20 30\n30 10").unwrap();
        let back = p.to_json().to_graph().unwrap();
        assert_eq!(back.labelled_edges(), p.labelled_edges());
    }

    #[test]
    fn dot_marks_dashed_edges() {
        let p = g(3, &[(0, 1), (1, 2)]);
        let dot = p.dot_with(&[(Edge::new(0, 2), true), (Edge::new(1, 0), false)]);
        assert!(dot.contains("0 -- 1;"));
        assert!(dot.contains("0 -- 2 [style=dashed];"));
    }
}

//! Seeded random graph generators and exhaustive small-graph enumeration.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::factor::{check_lemma_preconditions, check_theorem_preconditions};
use crate::graph::Graph;
use crate::structure::{classify, decompose};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Undirected graph under construction, as an edge set.
#[derive(Debug, Clone, Default)]
struct Builder {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    fn edge(&mut self, u: usize, v: usize) -> bool {
        u != v && self.edges.insert((u.min(v), u.max(v)))
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    fn build(&self) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().copied()).expect("builder keeps a simple graph")
    }

    /// Attaches a random 2-connected graph on `k` vertices, one of which is
    /// the existing vertex `at` (or all new when `at` is `None`).
    fn block(&mut self, rng: &mut impl Rng, k: usize, at: Option<usize>, chords: usize) {
        let mut vs: Vec<usize> = at.into_iter().collect();
        while vs.len() < k {
            vs.push(self.vertex());
        }
        let local = random_two_connected(rng, k, chords);
        for e in local.edges() {
            self.edge(vs[e.lo()], vs[e.hi()]);
        }
    }
}

/// Random 2-connected graph on `n >= 3` vertices by ear decomposition, plus
/// up to `chords` extra edges.
pub fn random_two_connected(rng: &mut impl Rng, n: usize, chords: usize) -> Graph {
    assert!(n >= 3, "2-connected graphs need three vertices");
    let mut b = Builder::default();
    let first = rng.gen_range(3..=n.min(6));
    for _ in 0..first {
        b.vertex();
    }
    for i in 0..first {
        b.edge(i, (i + 1) % first);
    }
    while b.n < n {
        let inner = rng.gen_range(1..=(n - b.n).min(4));
        let u = rng.gen_range(0..b.n);
        let mut v = rng.gen_range(0..b.n - 1);
        if v >= u {
            v += 1;
        }
        let mut prev = u;
        for _ in 0..inner {
            let w = b.vertex();
            b.edge(prev, w);
            prev = w;
        }
        b.edge(prev, v);
    }
    for _ in 0..chords {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        b.edge(u, v);
    }
    b.build()
}

/// Random connected bridgeless graph: 2-connected blocks glued at cut
/// vertices. Block sizes stay within `3..=max_block`.
fn glued_core(rng: &mut impl Rng, target: usize, max_block: usize) -> Builder {
    let mut b = Builder::default();
    let k = rng.gen_range(3..=max_block.min(target.max(3)));
    let chords = rng.gen_range(0..=k / 2);
    b.block(rng, k, None, chords);
    while b.n + 2 <= target {
        let room = (target - b.n + 1).min(max_block);
        if room < 3 {
            break;
        }
        let k = rng.gen_range(3..=room);
        let at = rng.gen_range(0..b.n);
        let chords = rng.gen_range(0..=k / 2);
        b.block(rng, k, Some(at), chords);
    }
    b
}

/// Random 2-edge-connected graph on at most `max_n` vertices.
pub fn random_two_edge_connected(rng: &mut impl Rng, max_n: usize, max_block: usize) -> Graph {
    let target = rng.gen_range(3..=max_n);
    let core = glued_core(rng, target, max_block).build();
    relabel(rng, &core)
}

fn cut_vertices(b: &Builder) -> BTreeSet<usize> {
    decompose(&b.build()).expect("core is connected").cut_vertices.into_iter().collect()
}

/// Random graph without non-trivial bridges and without bad leaves, at most
/// `max_n` vertices: a bridgeless core with pendant leaves, at least two at
/// each vertex that is not a cut vertex of the core.
pub fn lemma_graph(rng: &mut impl Rng, max_n: usize, max_block: usize) -> Graph {
    loop {
        let budget = rng.gen_range(max_n / 2..=max_n);
        let core_n = rng.gen_range(3..=budget.saturating_sub(2).max(3));
        let mut b = glued_core(rng, core_n, max_block);
        let cuts = cut_vertices(&b);
        let mut vs: Vec<usize> = (0..b.n).collect();
        vs.shuffle(rng);
        for v in vs {
            let leaves = if cuts.contains(&v) {
                rng.gen_range(0..=2)
            } else if rng.gen_bool(0.3) {
                rng.gen_range(2..=3)
            } else {
                0
            };
            if b.n + leaves > max_n {
                continue;
            }
            for _ in 0..leaves {
                let l = b.vertex();
                b.edge(v, l);
            }
        }
        let g = relabel(rng, &b.build());
        let cls = classify(&g, &decompose(&g).expect("connected"));
        if check_lemma_preconditions(&g, &cls).is_ok() {
            return g;
        }
    }
}

/// Random graph without non-trivial bridges whose bad leaves are pairwise
/// at distance 3 or at least 5, with at least one bad leaf.
pub fn theorem_graph(rng: &mut impl Rng, max_n: usize, max_block: usize) -> Graph {
    loop {
        let budget = rng.gen_range(max_n / 2..=max_n);
        let core_n = rng.gen_range(3..=budget.saturating_sub(3).max(3));
        let mut b = glued_core(rng, core_n, max_block);
        let core = b.build();
        let cuts = cut_vertices(&b);
        let mut vs: Vec<usize> = (0..b.n).filter(|v| !cuts.contains(v)).collect();
        vs.shuffle(rng);
        let mut anchors: Vec<usize> = Vec::new();
        for &v in &vs {
            if b.n >= max_n {
                break;
            }
            let far_enough = anchors
                .iter()
                .all(|&y| core.distance(v, y).expect("valid vertices") != Some(2));
            // Prefer neighbors of existing anchors now and then, so clusters
            // of adjacent anchors occur.
            let next_to = anchors.iter().any(|&y| b.has(v, y));
            if far_enough && (next_to || rng.gen_bool(0.5)) {
                anchors.push(v);
                let l = b.vertex();
                b.edge(v, l);
            } else if rng.gen_bool(0.2) && b.n + 2 <= max_n {
                for _ in 0..2 {
                    let l = b.vertex();
                    b.edge(v, l);
                }
            }
        }
        for &v in &cuts {
            if b.n < max_n && rng.gen_bool(0.3) {
                let l = b.vertex();
                b.edge(v, l);
            }
        }
        if anchors.is_empty() {
            continue;
        }
        let g = relabel(rng, &b.build());
        let cls = classify(&g, &decompose(&g).expect("connected"));
        if !cls.bad_leaves.is_empty()
            && check_theorem_preconditions(&g, &cls).is_ok_and(|v| v.is_empty())
        {
            return g;
        }
    }
}

/// The same graph with vertex ids shuffled.
pub fn relabel(rng: &mut impl Rng, g: &Graph) -> Graph {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(rng);
    Graph::from_edges(g.n(), g.edges().map(|e| (perm[e.lo()], perm[e.hi()]))).expect("relabelled")
}

/// Canonical code of a graph on at most 11 vertices: the largest upper
/// triangle bit string over all orderings compatible with colour refinement.
/// Two graphs get the same code iff they are isomorphic.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= 11, "canonical codes cover at most 11 vertices");
    if n == 0 {
        return 0;
    }
    let adj: Vec<u16> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u16, |m, &w| m | 1 << w))
        .collect();
    let cells = refine(&adj, vec![(0..n).collect()]);
    let mut best = 0;
    search_code(&adj, cells, &mut best);
    best
}

fn search_code(adj: &[u16], cells: Vec<Vec<usize>>, best: &mut u64) {
    let Some(target) = cells
        .iter()
        .enumerate()
        .filter(|(_, c)| c.len() > 1)
        .min_by_key(|(_, c)| c.len())
        .map(|(i, _)| i)
    else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        *best = (*best).max(code_of(adj, &order));
        return;
    };
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cells[target] {
        // Swapping twins is an automorphism, so one of them suffices.
        let twin = tried.iter().any(|&t| {
            let (bt, bv) = (1u16 << t, 1u16 << v);
            adj[t] & !bv == adj[v] & !bt
        });
        if twin {
            continue;
        }
        tried.push(v);
        let mut next = cells.clone();
        let rest: Vec<usize> = next[target].iter().copied().filter(|&w| w != v).collect();
        next.splice(target..=target, [vec![v], rest]);
        search_code(adj, refine(adj, next), best);
    }
}

fn code_of(adj: &[u16], order: &[usize]) -> u64 {
    let n = order.len();
    let mut code = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            code = code << 1 | u64::from(adj[order[i]] >> order[j] & 1);
        }
    }
    code
}

/// Splits cells by neighbor counts into every cell until stable. Cell order
/// depends only on the counts, never on vertex ids.
fn refine(adj: &[u16], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let masks: Vec<u16> = cells.iter().map(|c| c.iter().fold(0u16, |m, &v| m | 1 << v)).collect();
        let signature = |v: usize| -> Vec<u32> { masks.iter().map(|&m| (adj[v] & m).count_ones()).collect() };
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            let mut keyed: Vec<(Vec<u32>, usize)> = cell.iter().map(|&v| (signature(v), v)).collect();
            keyed.sort();
            let mut group: Vec<usize> = Vec::new();
            for i in 0..keyed.len() {
                if i > 0 && keyed[i].0 != keyed[i - 1].0 {
                    next.push(std::mem::take(&mut group));
                }
                group.push(keyed[i].1);
            }
            next.push(group);
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

/// All graphs on `n` vertices up to isomorphism, connected or not.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let mut level: Vec<Graph> = vec![Graph::empty(0)];
    for k in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            let base: Vec<(usize, usize)> = g.edges().map(|e| e.ends()).collect();
            for subset in 0u32..1 << (k - 1) {
                let mut edges = base.clone();
                edges.extend((0..k - 1).filter(|v| subset >> v & 1 == 1).map(|v| (v, k - 1)));
                let h = Graph::from_edges(k, edges).expect("simple by construction");
                if seen.insert(canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

/// 2-connected graphs on `3..=max_n` vertices up to isomorphism.
pub fn two_connected_graphs(max_n: usize) -> Vec<Graph> {
    (3..=max_n)
        .flat_map(all_graphs)
        .filter(Graph::is_two_connected)
        .collect()
}

/// 2-edge-connected graphs on `3..=max_n` vertices up to isomorphism.
pub fn two_edge_connected_graphs(max_n: usize) -> Vec<Graph> {
    (3..=max_n)
        .flat_map(all_graphs)
        .filter(Graph::is_two_edge_connected)
        .collect()
}

//! Exact search for Hamiltonian cycles in the square of a 2-connected block
//! with constraints at prescribed vertices: both cycle edges at `v1` are
//! edges of the block, and (optionally) at least one cycle edge at `v2` is
//! too, distinct from the `v1` edges when `v1` and `v2` are consecutive on
//! the cycle.
//!
//! Such a cycle always exists, so a search that comes back empty-handed is a
//! bug or a broken precondition and is reported as an internal error.

use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::graph::{Edge, Graph, Origin};

/// Largest block searched without an explicit node budget.
pub const DEFAULT_MAX_BLOCK: usize = 24;

/// Hard ceiling imposed by the bitset representation.
pub const MAX_BLOCK: usize = 64;

#[derive(Debug, Clone)]
pub struct ConstrainedCycleProblem<'a> {
    pub block: &'a Graph,
    pub v1: usize,
    pub v2: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchBudget {
    /// Total search nodes allowed; `None` means unbounded, which is only
    /// accepted for blocks up to [`DEFAULT_MAX_BLOCK`] vertices.
    pub max_nodes: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    /// Vertices in cycle order, starting at `v1`.
    pub cycle: Vec<usize>,
    /// Consecutive pairs (closing pair included) with their origin.
    pub edges: Vec<(Edge, Origin)>,
}

impl CycleWitness {
    fn from_cycle(block: &Graph, cycle: Vec<usize>) -> Self {
        let k = cycle.len();
        let edges = (0..k)
            .map(|i| {
                let e = Edge::new(cycle[i], cycle[(i + 1) % k]);
                (e, block.origin_of(e))
            })
            .collect();
        CycleWitness { cycle, edges }
    }

    /// The two cycle edges at `v`.
    pub fn edges_at(&self, v: usize) -> Vec<Edge> {
        self.edges
            .iter()
            .map(|&(e, _)| e)
            .filter(|e| e.contains(v))
            .collect()
    }
}

pub fn constrained_hamiltonian_cycle(
    p: &ConstrainedCycleProblem<'_>,
    budget: SearchBudget,
) -> Result<CycleWitness> {
    let g = p.block;
    let n = g.n();
    g.check_vertex(p.v1)?;
    if let Some(v2) = p.v2 {
        g.check_vertex(v2)?;
        if v2 == p.v1 {
            return Err(Error::Argument("v1 and v2 must be distinct".into()));
        }
    }
    if !g.is_two_connected() {
        return Err(Error::Precondition {
            context: "constrained Hamiltonian cycle",
            violations: vec![Violation::NotTwoConnected],
        });
    }
    if n > MAX_BLOCK || (n > DEFAULT_MAX_BLOCK && budget.max_nodes.is_none()) {
        return Err(Error::Budget {
            budget: budget.max_nodes.unwrap_or(0),
            explored: 0,
            partial: Vec::new(),
        });
    }
    if n == 3 {
        let mut cycle = vec![p.v1];
        cycle.extend((0..3).filter(|&v| v != p.v1));
        return Ok(CycleWitness::from_cycle(g, cycle));
    }

    let sq = g.square();
    let mask = |gr: &Graph, v: usize| gr.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w);
    let mut search = Search {
        full: if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
        sq: (0..n).map(|v| mask(&sq, v)).collect(),
        orig: (0..n).map(|v| mask(g, v)).collect(),
        v1: p.v1,
        v2: p.v2,
        path: Vec::with_capacity(n),
        visited: 0,
        target: 0,
        nodes: 0,
        limit: 0,
        best: Vec::new(),
    };

    let anchors: Vec<usize> = g.neighbors(p.v1).to_vec();
    let mut live: Vec<(usize, usize)> = Vec::new();
    for (i, &a) in anchors.iter().enumerate() {
        for &b in &anchors[i + 1..] {
            live.push((a, b));
        }
    }

    // Round-robin over anchor pairs with a growing per-pair limit so that one
    // infeasible pair cannot monopolise the search.
    let mut per_pair = 2_000u64;
    let mut total = 0u64;
    while !live.is_empty() {
        let mut still_live = Vec::new();
        for &(a, b) in &live {
            let allowed = match budget.max_nodes {
                Some(max) if total >= max => {
                    return Err(Error::Budget {
                        budget: max,
                        explored: total,
                        partial: search.best.clone(),
                    })
                }
                Some(max) => per_pair.min(max - total),
                None => per_pair,
            };
            let outcome = search.run(a, b, allowed);
            total += search.nodes;
            match outcome {
                Outcome::Found => return Ok(CycleWitness::from_cycle(g, search.path.clone())),
                Outcome::Exhausted => {}
                Outcome::OutOfBudget => still_live.push((a, b)),
            }
        }
        live = still_live;
        per_pair = per_pair.saturating_mul(4);
    }
    Err(Error::internal(format!(
        "no constrained Hamiltonian cycle in the square of a 2-connected block \
         (n = {n}, v1 = {}, v2 = {:?}); existence is guaranteed",
        p.v1, p.v2
    )))
}

enum Outcome {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search {
    full: u64,
    sq: Vec<u64>,
    orig: Vec<u64>,
    v1: usize,
    v2: Option<usize>,
    path: Vec<usize>,
    visited: u64,
    target: usize,
    nodes: u64,
    limit: u64,
    best: Vec<usize>,
}

impl Search {
    /// Looks for a Hamiltonian path `v1, a, ..., b` of the square.
    fn run(&mut self, a: usize, b: usize, limit: u64) -> Outcome {
        self.path.clear();
        self.path.extend([self.v1, a]);
        self.visited = 1 << self.v1 | 1 << a;
        self.target = b;
        self.nodes = 0;
        self.limit = limit;
        if !self.feasible(a) {
            return Outcome::Exhausted;
        }
        self.extend()
    }

    fn extend(&mut self) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Outcome::OutOfBudget;
        }
        if self.path.len() > self.best.len() {
            self.best.clone_from(&self.path);
        }
        let c = *self.path.last().expect("path starts at v1");
        let prev = self.path[self.path.len() - 2];
        let unvisited = self.full & !self.visited;
        let tbit = 1u64 << self.target;

        let mut allowed = self.sq[c];
        if self.v2 == Some(c) {
            // At v2: next to v1 the outgoing edge must be original, otherwise
            // at least one of the two edges must be.
            let in_orig = self.orig[c] >> prev & 1 == 1;
            if prev == self.v1 || !in_orig {
                allowed &= self.orig[c];
            }
        }

        if unvisited == tbit {
            let mut close = allowed;
            if self.v2 == Some(self.target) {
                close &= self.orig[c];
            }
            if close & tbit != 0 {
                self.path.push(self.target);
                return Outcome::Found;
            }
            return Outcome::Exhausted;
        }

        let cand = allowed & unvisited & !tbit;
        let first = cand & self.orig[c];
        for group in [first, cand & !first] {
            let mut rest = group;
            while rest != 0 {
                let w = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                self.path.push(w);
                self.visited |= 1 << w;
                if self.feasible(w) {
                    match self.extend() {
                        Outcome::Exhausted => {}
                        other => return other,
                    }
                }
                self.visited &= !(1 << w);
                self.path.pop();
            }
        }
        Outcome::Exhausted
    }

    /// Cheap necessary conditions for completing the path from `w`.
    fn feasible(&self, w: usize) -> bool {
        let unvisited = self.full & !self.visited;
        let open = unvisited | 1 << w;
        let tbit = 1u64 << self.target;
        if unvisited == tbit {
            return self.sq[w] & tbit != 0;
        }
        let mut forced_next = 0;
        let mut rest = unvisited & !tbit;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let options = self.sq[u] & open;
            match options.count_ones() {
                0 | 1 => return false,
                2 if options >> w & 1 == 1 => forced_next += 1,
                _ => {}
            }
        }
        if forced_next > 1 {
            return false;
        }
        let t_options = self.sq[self.target] & (open & !tbit);
        if t_options == 0 {
            return false;
        }
        if self.v2 == Some(self.target) && t_options & self.orig[self.target] == 0 {
            return false;
        }
        // The unvisited region plus the current end must stay connected.
        let mut reach = 1u64 << w;
        let mut frontier = reach;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.sq[v] & unvisited;
            }
            frontier = next & !reach;
            reach |= next;
        }
        reach & unvisited == unvisited
    }
}

//! Exhaustive search for [2,2s]-factors of a graph's square.
//!
//! Vertices are settled one at a time in order of decreasing square degree:
//! settling a vertex fixes every undecided square edge at it, choosing a
//! subset that gives it an even degree in `[2, 2s]`. After each step every
//! touched vertex must still be able to reach an admissible degree, and the
//! included plus undecided edges must still connect the whole vertex set.

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Origin};

/// Largest instance searched without [`OracleBudget::force`].
pub const MAX_ORACLE_VERTICES: usize = 18;
pub const MAX_ORACLE_EDGES: usize = 80;

#[derive(Debug, Clone, Copy, Default)]
pub struct OracleBudget {
    /// Subsets tried before giving up; `None` is unbounded.
    pub max_nodes: Option<u64>,
    /// Search instances beyond the default size limits (still at most 64
    /// vertices).
    pub force: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "camelCase")]
pub enum OracleOutcome {
    Yes { witness: Vec<(Edge, Origin)> },
    No { explored: u64 },
    OutOfBudget { explored: u64 },
}

impl OracleOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleOutcome::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, OracleOutcome::No { .. })
    }
}

/// Decides whether `g`'s square has a connected even spanning subgraph with
/// all degrees in `[2, 2s]`.
pub fn exists_factor(g: &Graph, s: usize, budget: OracleBudget) -> Result<OracleOutcome> {
    search(g, s, None, budget)
}

/// Decides whether `g`'s square has a [2,4]-factor with some vertex of
/// degree exactly 4, trying each vertex in turn.
pub fn degree4_variant_check(g: &Graph, budget: OracleBudget) -> Result<OracleOutcome> {
    let mut explored = 0;
    let mut exhausted = true;
    for v in 0..g.n() {
        let remaining = OracleBudget {
            max_nodes: budget.max_nodes.map(|m| m.saturating_sub(explored)),
            ..budget
        };
        match search(g, 2, Some(v), remaining)? {
            found @ OracleOutcome::Yes { .. } => return Ok(found),
            OracleOutcome::No { explored: e } => explored += e,
            OracleOutcome::OutOfBudget { explored: e } => {
                explored += e;
                exhausted = false;
                break;
            }
        }
    }
    Ok(if exhausted {
        OracleOutcome::No { explored }
    } else {
        OracleOutcome::OutOfBudget { explored }
    })
}

fn search(g: &Graph, s: usize, degree_four: Option<usize>, budget: OracleBudget) -> Result<OracleOutcome> {
    if s == 0 {
        return Err(Error::Argument("s must be positive".into()));
    }
    let n = g.n();
    let sq = g.square();
    if n > 64 || (!budget.force && (n > MAX_ORACLE_VERTICES || sq.m() > MAX_ORACLE_EDGES)) {
        return Ok(OracleOutcome::OutOfBudget { explored: 0 });
    }
    if n == 0 {
        return Ok(OracleOutcome::No { explored: 0 });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(sq.degree(v)), v));
    let mask = |v: usize| sq.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w);
    let mut state = State {
        n,
        max_deg: 2 * s,
        degree_four,
        order,
        undecided: (0..n).map(mask).collect(),
        included: vec![0; n],
        nodes: 0,
        limit: budget.max_nodes,
    };
    let found = state.settle(0);
    let explored = state.nodes;
    Ok(match found {
        Step::Found => {
            let mut witness = Vec::new();
            for v in 0..n {
                let mut rest = state.included[v] & !((1u64 << v << 1).wrapping_sub(1));
                while rest != 0 {
                    let w = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let e = Edge::new(v, w);
                    witness.push((e, g.origin_of(e)));
                }
            }
            OracleOutcome::Yes { witness }
        }
        Step::Exhausted => OracleOutcome::No { explored },
        Step::OutOfBudget => OracleOutcome::OutOfBudget { explored },
    })
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct State {
    n: usize,
    max_deg: usize,
    degree_four: Option<usize>,
    order: Vec<usize>,
    undecided: Vec<u64>,
    included: Vec<u64>,
    nodes: u64,
    limit: Option<u64>,
}

impl State {
    fn bounds(&self, v: usize) -> (usize, usize) {
        match self.degree_four {
            Some(f) if f == v => (4, 4),
            _ => (2, self.max_deg),
        }
    }

    /// Some even degree in the admissible range is still reachable.
    fn can_finish(&self, v: usize) -> bool {
        let d = self.included[v].count_ones() as usize;
        let r = self.undecided[v].count_ones() as usize;
        let (lo, hi) = self.bounds(v);
        let lo = lo.max(d);
        let hi = hi.min(d + r);
        let first_even = lo + lo % 2;
        first_even <= hi
    }

    fn connected(&self) -> bool {
        let mut reach = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.included[v] | self.undecided[v];
            }
            frontier = next & !reach;
            reach |= next;
        }
        reach.count_ones() as usize == self.n
    }

    fn settle(&mut self, i: usize) -> Step {
        if i == self.n {
            return Step::Found;
        }
        let v = self.order[i];
        let d = self.included[v].count_ones() as usize;
        let open: Vec<usize> = bits(self.undecided[v]).collect();
        let (lo, hi) = self.bounds(v);
        for k in (0..=open.len()).filter(|k| {
            let total = d + k;
            total.is_multiple_of(2) && (lo..=hi).contains(&total)
        }) {
            for chosen in open.iter().copied().combinations(k) {
                self.nodes += 1;
                if self.limit.is_some_and(|l| self.nodes > l) {
                    return Step::OutOfBudget;
                }
                let picked = chosen.iter().fold(0u64, |m, &w| m | 1 << w);
                self.apply(v, &open, picked);
                let ok = open.iter().all(|&w| self.can_finish(w)) && self.connected();
                if ok {
                    match self.settle(i + 1) {
                        Step::Exhausted => {}
                        other => return other,
                    }
                }
                self.undo(v, &open, picked);
            }
        }
        Step::Exhausted
    }

    fn apply(&mut self, v: usize, open: &[usize], picked: u64) {
        for &w in open {
            self.undecided[v] &= !(1 << w);
            self.undecided[w] &= !(1 << v);
            if picked >> w & 1 == 1 {
                self.included[v] |= 1 << w;
                self.included[w] |= 1 << v;
            }
        }
    }

    fn undo(&mut self, v: usize, open: &[usize], picked: u64) {
        for &w in open {
            self.undecided[v] |= 1 << w;
            self.undecided[w] |= 1 << v;
            if picked >> w & 1 == 1 {
                self.included[v] &= !(1 << w);
                self.included[w] &= !(1 << v);
            }
        }
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_factor;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn star(s: usize) -> Graph {
        g(s + 1, &(1..=s).map(|l| (0, l)).collect::<Vec<_>>())
    }

    #[test]
    fn small_cases() {
        let b = OracleBudget::default();
        let p3 = star(2);
        let out = exists_factor(&p3, 1, b).unwrap();
        let OracleOutcome::Yes { witness } = out else { panic!("{out:?}") };
        assert!(verify_factor(&p3, &witness, 1).pass);
        assert!(exists_factor(&star(3), 1, b).unwrap().is_yes());
        // The square of K_{1,4} is K5.
        assert!(exists_factor(&star(4), 1, b).unwrap().is_yes());
        assert!(exists_factor(&star(4), 2, b).unwrap().is_yes());
        assert!(exists_factor(&g(2, &[(0, 1)]), 2, b).unwrap().is_no());
    }

    #[test]
    fn degree_four_variants() {
        let b = OracleBudget::default();
        assert!(degree4_variant_check(&star(2), b).unwrap().is_no());
        assert!(degree4_variant_check(&star(3), b).unwrap().is_no());
        let out = degree4_variant_check(&star(4), b).unwrap();
        let OracleOutcome::Yes { witness } = out else { panic!("{out:?}") };
        assert!(verify_factor(&star(4), &witness, 2).pass);
    }

    #[test]
    fn size_refusal_and_budget() {
        let big = g(20, &(0..20).map(|i| (i, (i + 1) % 20)).collect::<Vec<_>>());
        assert!(matches!(
            exists_factor(&big, 1, OracleBudget::default()).unwrap(),
            OracleOutcome::OutOfBudget { explored: 0 }
        ));
        let forced = OracleBudget { max_nodes: None, force: true };
        assert!(exists_factor(&big, 1, forced).unwrap().is_yes());
        let tiny = OracleBudget { max_nodes: Some(1), force: true };
        assert!(matches!(
            exists_factor(&big, 1, tiny).unwrap(),
            OracleOutcome::OutOfBudget { .. }
        ));
    }
}

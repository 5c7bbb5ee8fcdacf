//! [2,4]-factors with designated edges for graphs without non-trivial
//! bridges and without bad leaves.
//!
//! The construction removes the leaves hanging off trivial cut vertices,
//! walks the remaining blocks in [`order_blocks`] order and glues together
//! constrained Hamiltonian cycles of the cyclic blocks, then threads the
//! removed leaves back in as short cycles through their cut vertex.
//!
//! Gluing a cyclic block `B` onto its parent cut vertex `v` happens in one of
//! three ways:
//!
//! * [`Attach::Disjoint`]: `v` has no earlier child; the cycle of `B` is added
//!   as is and `v` goes from degree 2 to 4.
//! * [`Attach::LeafPath`]: `v` also carries leaves `l1..lj` (which precede `B`
//!   in the ordering). The cycle edge `v a` is replaced by the path
//!   `v l1 .. lj a`; every `l` gets degree 2 and `v` still ends at 4.
//! * [`Attach::Splice`]: `v` already has degree 4. The open child edge `v w`
//!   and the cycle edge `v a` are replaced by `w a`, which lies in the square
//!   because both ends are neighbors of `v`. Degrees of `v`, `w` and `a` are
//!   unchanged.
//!
//! Each cut vertex keeps two original edges from its children that are never
//! touched again; these are its designated pair. Designated pairs of
//! different cut vertices come from different blocks and are therefore
//! disjoint, and the edges at `u` live in the root block, which is nobody's
//! child.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::graph::{Edge, Graph};
use crate::ham::{constrained_hamiltonian_cycle, ConstrainedCycleProblem, SearchBudget};
use crate::structure::{classify, decompose, order_blocks, strip, StructureClassification};

use super::certificate::{CertificateKind, Designation, FactorCertificate, FactorEdges};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Attach {
    Root,
    Disjoint,
    LeafPath,
    Splice,
}

/// One block attachment of the peel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeelStep {
    pub block: usize,
    pub attach: Attach,
    /// Parent cut vertex, absent for the root.
    pub cut_vertex: Option<usize>,
    pub added: Vec<Edge>,
    pub removed: Vec<Edge>,
}

impl std::fmt::Display for PeelStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "block {} {:?}", self.block, self.attach)?;
        if let Some(v) = self.cut_vertex {
            write!(f, " at {v}")?;
        }
        let list = |es: &[Edge]| es.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, " +[{}] -[{}]", list(&self.added), list(&self.removed))
    }
}

/// Factor of a bridgeless-up-to-leaves graph before the removed leaves return.
#[derive(Debug, Clone)]
pub(crate) struct Peel {
    pub(crate) factor: FactorEdges,
    pub(crate) designations: BTreeMap<usize, [Edge; 2]>,
    pub(crate) trace: Vec<PeelStep>,
}

/// `Ok(())` when the hypotheses hold, or when `g` is K_{1,2} / K_{1,3}.
pub fn check_lemma_preconditions(
    g: &Graph,
    cls: &StructureClassification,
) -> std::result::Result<(), Vec<Violation>> {
    if star_leaves(g).is_some_and(|s| s == 2 || s == 3) {
        return Ok(());
    }
    let mut violations: Vec<Violation> = cls
        .nontrivial_bridges
        .iter()
        .map(|&edge| Violation::NonTrivialBridge { edge })
        .collect();
    violations.extend(
        cls.bad_leaves
            .iter()
            .map(|&vertex| Violation::BadLeaf { vertex }),
    );
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Number of leaves when `g` is a star K_{1,s} with `s >= 2`.
pub(crate) fn star_leaves(g: &Graph) -> Option<usize> {
    let n = g.n();
    if n < 3 || g.m() != n - 1 {
        return None;
    }
    (0..n).any(|v| g.degree(v) == n - 1).then_some(n - 1)
}

pub(crate) fn basic_shape(g: &Graph) -> std::result::Result<(), Violation> {
    if g.m() < 2 {
        return Err(Violation::Degenerate {
            vertices: g.n(),
            edges: g.m(),
        });
    }
    if !g.is_connected() {
        return Err(Violation::Disconnected);
    }
    Ok(())
}

const LEMMA: &str = "graph without non-trivial bridges and bad leaves required";

/// Builds a [2,4]-factor certificate of `g`'s square. With `u` given, both
/// factor edges at `u` are edges of `g`.
pub fn lemma_factor(g: &Graph, u: Option<usize>) -> Result<FactorCertificate> {
    basic_shape(g).map_err(|v| precondition(vec![v]))?;
    if let Some(u) = u {
        g.check_vertex(u)?;
    }
    let bct = decompose(g)?;
    let cls = classify(g, &bct);
    check_lemma_preconditions(g, &cls).map_err(precondition)?;
    if let Some(u) = u {
        if g.is_leaf(u) || cls.is_cut_vertex(u) {
            return Err(precondition(vec![Violation::InvalidAnchor { vertex: u }]));
        }
    }
    match star_leaves(g) {
        Some(s @ (2 | 3)) => return Err(precondition(vec![Violation::SmallStar { leaves: s }])),
        Some(_) => return star_factor(g),
        None => {}
    }

    let mut removed = Vec::new();
    for (&y, leaves) in &cls.leaf_sets {
        if leaves.len() < 2 {
            return Err(Error::internal(format!(
                "trivial cut vertex {y} has {} leaves in a graph without bad leaves",
                leaves.len()
            )));
        }
        removed.extend(leaves);
    }
    let core = strip(g, &removed)?;
    let core_u = u.map(|u| core.new_of_old[u].expect("u is not a removed leaf"));
    let peel = peel(&core.graph, core_u)?;

    let lift = |e: Edge| Edge::new(core.old_of_new[e.lo()], core.old_of_new[e.hi()]);
    let mut factor = FactorEdges::default();
    for e in peel.factor.iter() {
        factor.add(lift(e))?;
    }
    let mut cut_designations: BTreeMap<usize, [Edge; 2]> = peel
        .designations
        .iter()
        .map(|(&v, pair)| (core.old_of_new[v], pair.map(lift)))
        .collect();

    for (&y, leaves) in &cls.leaf_sets {
        if factor.degree(y) != 2 {
            return Err(Error::Internal {
                message: format!("trivial cut vertex {y} has degree {} before its leaf cycle", factor.degree(y)),
                trace: trace_lines(&peel.trace),
            });
        }
        let mut walk = vec![y];
        walk.extend(leaves);
        for i in 0..walk.len() {
            factor.add(Edge::new(walk[i], walk[(i + 1) % walk.len()]))?;
        }
        let last = *leaves.last().expect("at least two leaves");
        cut_designations.insert(y, [Edge::new(y, leaves[0]), Edge::new(y, last)]);
    }

    let u_designation = match u {
        Some(u) => {
            let at_u = factor.edges_at(u);
            let [a, b] = at_u[..] else {
                return Err(Error::internal(format!("u = {u} has factor degree {}", at_u.len())));
            };
            Some(Designation { vertex: u, edges: [a, b] })
        }
        None => None,
    };

    let cert = FactorCertificate {
        kind: CertificateKind::Lemma,
        edges: factor.tagged(g),
        host: g.clone(),
        u_designation,
        cut_designations,
    };
    let bad: Vec<usize> = cert
        .degrees()
        .iter()
        .enumerate()
        .filter(|&(_, &d)| d != 2 && d != 4)
        .map(|(v, _)| v)
        .collect();
    if !bad.is_empty() {
        return Err(Error::Internal {
            message: format!("vertices {bad:?} have degree outside {{2, 4}}"),
            trace: trace_lines(&peel.trace),
        });
    }
    Ok(cert)
}

fn precondition(violations: Vec<Violation>) -> Error {
    Error::Precondition {
        context: LEMMA,
        violations,
    }
}

fn trace_lines(trace: &[PeelStep]) -> Vec<String> {
    trace.iter().map(ToString::to_string).collect()
}

/// K_{1,s} with s >= 4: two cycles through the center over the leaves split
/// into runs of sizes ceil(s/2) and floor(s/2).
fn star_factor(g: &Graph) -> Result<FactorCertificate> {
    let center = (0..g.n())
        .find(|&v| g.degree(v) == g.n() - 1)
        .expect("star has a center");
    let leaves: Vec<usize> = g.neighbors(center).to_vec();
    let (first, second) = leaves.split_at(leaves.len().div_ceil(2));
    let mut factor = FactorEdges::default();
    for run in [first, second] {
        let mut walk = vec![center];
        walk.extend(run);
        for i in 0..walk.len() {
            factor.add(Edge::new(walk[i], walk[(i + 1) % walk.len()]))?;
        }
    }
    let designated = [
        Edge::new(center, first[0]),
        Edge::new(center, *first.last().expect("run of at least two")),
    ];
    Ok(FactorCertificate {
        kind: CertificateKind::Lemma,
        edges: factor.tagged(g),
        host: g.clone(),
        u_designation: None,
        cut_designations: BTreeMap::from([(center, designated)]),
    })
}

/// Per cut vertex: the designated child edge that stays, and the child edge
/// still open for splicing.
#[derive(Debug, Clone, Copy)]
struct ChildEdges {
    kept: Edge,
    open: Edge,
}

/// Factor of a connected graph whose bridges all end in leaves and whose
/// leaves all hang off vertices lying in at least two cyclic blocks.
pub(crate) fn peel(g: &Graph, u: Option<usize>) -> Result<Peel> {
    let bct = decompose(g)?;
    let ordering = order_blocks(g, &bct, u)?;
    let mut factor = FactorEdges::default();
    let mut trace: Vec<PeelStep> = Vec::new();
    let mut pending: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut state: BTreeMap<usize, ChildEdges> = BTreeMap::new();

    let fail = |message: String, trace: &[PeelStep]| Error::Internal {
        message,
        trace: trace_lines(trace),
    };

    for &b in &ordering.sequence {
        let block = &bct.blocks[b];
        let parent = ordering.parent_cut_vertex[b];
        if block.is_bridge() {
            let v = parent.ok_or_else(|| fail("bridge as root block".into(), &trace))?;
            let leaf = block.min_vertex_except(v);
            if !g.is_leaf(leaf) {
                return Err(fail(format!("bridge {} does not end in a leaf", block.edges[0]), &trace));
            }
            if state.contains_key(&v) {
                return Err(fail(format!("leaf {leaf} at {v} ordered after a cyclic child"), &trace));
            }
            pending.entry(v).or_default().push(leaf);
            continue;
        }

        let (local, to_host) = block.to_graph(g)?;
        let local_of = |v: usize| to_host.binary_search(&v).expect("vertex in block");
        let anchor = parent.or(u).unwrap_or(block.min_vertex());
        let witness = constrained_hamiltonian_cycle(
            &ConstrainedCycleProblem {
                block: &local,
                v1: local_of(anchor),
                v2: None,
            },
            SearchBudget::default(),
        )
        .map_err(|e| match e {
            Error::Internal { message, .. } => fail(message, &trace),
            other => other,
        })?;
        let cycle: Vec<Edge> = witness
            .edges
            .iter()
            .map(|&(e, _)| Edge::new(to_host[e.lo()], to_host[e.hi()]))
            .collect();

        let Some(v) = parent else {
            for &e in &cycle {
                factor.add(e)?;
            }
            trace.push(PeelStep {
                block: b,
                attach: Attach::Root,
                cut_vertex: None,
                added: cycle,
                removed: Vec::new(),
            });
            continue;
        };

        let mut at_v: Vec<Edge> = cycle.iter().copied().filter(|e| e.contains(v)).collect();
        at_v.sort_by_key(|e| e.other(v));
        let [f1, f2] = at_v[..] else {
            return Err(fail(format!("cycle of block {b} has {} edges at {v}", at_v.len()), &trace));
        };
        if !g.contains_edge(f1) || !g.contains_edge(f2) {
            return Err(fail(format!("cycle of block {b} uses a square-only edge at {v}"), &trace));
        }
        for &e in &cycle {
            factor.add(e)?;
        }
        let mut added = cycle;
        let mut removed = Vec::new();

        let attach = match (state.get(&v).copied(), pending.remove(&v)) {
            (None, Some(leaves)) => {
                let a = f1.other(v);
                factor.remove(f1)?;
                removed.push(f1);
                let mut path = vec![v];
                path.extend(&leaves);
                path.push(a);
                for pair in path.windows(2) {
                    let e = Edge::new(pair[0], pair[1]);
                    factor.add(e)?;
                    added.push(e);
                }
                state.insert(
                    v,
                    ChildEdges {
                        kept: Edge::new(v, leaves[0]),
                        open: f2,
                    },
                );
                Attach::LeafPath
            }
            (None, None) => {
                state.insert(v, ChildEdges { kept: f1, open: f2 });
                Attach::Disjoint
            }
            (Some(children), None) => {
                let w = children.open.other(v);
                let a = f1.other(v);
                factor.remove(children.open)?;
                factor.remove(f1)?;
                removed.extend([children.open, f1]);
                let bridge = Edge::new(w, a);
                factor.add(bridge)?;
                added.push(bridge);
                state.insert(
                    v,
                    ChildEdges {
                        kept: children.kept,
                        open: f2,
                    },
                );
                Attach::Splice
            }
            (Some(_), Some(leaves)) => {
                return Err(fail(format!("leaves {leaves:?} at {v} left unattached"), &trace));
            }
        };
        added.retain(|e| !removed.contains(e));
        trace.push(PeelStep {
            block: b,
            attach,
            cut_vertex: Some(v),
            added,
            removed,
        });
    }

    if let Some((v, leaves)) = pending.into_iter().next() {
        return Err(fail(format!("leaves {leaves:?} at {v} have no cyclic sibling"), &trace));
    }
    let mut designations = BTreeMap::new();
    for &v in &bct.cut_vertices {
        let children = state
            .get(&v)
            .ok_or_else(|| fail(format!("cut vertex {v} has no cyclic child"), &trace))?;
        designations.insert(v, [children.kept, children.open]);
    }
    Ok(Peel {
        factor,
        designations,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Origin;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn bowtie() -> Graph {
        g(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    }

    fn degrees(g: &Graph, f: &FactorEdges) -> Vec<usize> {
        (0..g.n()).map(|v| f.degree(v)).collect()
    }

    #[test]
    fn preconditions() {
        let b = bowtie();
        assert!(check_lemma_preconditions(&b, &classify(&b, &decompose(&b).unwrap())).is_ok());
        let k13 = g(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(check_lemma_preconditions(&k13, &classify(&k13, &decompose(&k13).unwrap())).is_ok());
        let (mixed, names) = crate::structure::tests::mixed_instance();
        let errs = check_lemma_preconditions(&mixed, &classify(&mixed, &decompose(&mixed).unwrap()))
            .unwrap_err();
        assert_eq!(errs.len(), 2);
        assert!(errs.contains(&Violation::NonTrivialBridge { edge: Edge::new(2, 8) }));
        assert!(errs.contains(&Violation::BadLeaf { vertex: 4 }));
        assert_eq!((names[2], names[8], names[4]), ("c3", "p", "x"));
    }

    #[test]
    fn c4_is_its_own_factor() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        for u in 0..4 {
            let cert = lemma_factor(&c4, Some(u)).unwrap();
            assert_eq!(cert.edges.len(), 4);
            assert!(cert.edges.values().all(|&o| o == Origin::Original));
            let d = cert.u_designation.unwrap();
            assert_eq!(d.vertex, u);
            assert!(d.edges.iter().all(|e| e.contains(u) && c4.contains_edge(*e)));
        }
    }

    #[test]
    fn bowtie_is_union_of_triangles() {
        let cert = lemma_factor(&bowtie(), None).unwrap();
        let expected: Vec<Edge> = bowtie().edges().collect();
        assert_eq!(cert.edges.keys().copied().collect::<Vec<_>>(), expected);
        assert_eq!(cert.degree(2), 4);
        let pair = cert.cut_designations[&2];
        // Both designated edges come from the child triangle 2,3,4.
        assert!(pair.iter().all(|e| e.contains(2) && (e.contains(3) || e.contains(4))));
    }

    #[test]
    fn star_k14_two_triangles() {
        let k14 = g(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let cert = lemma_factor(&k14, None).unwrap();
        assert_eq!(cert.degree(0), 4);
        assert!((1..5).all(|l| cert.degree(l) == 2));
        assert!(cert.edges.contains_key(&Edge::new(1, 2)));
        assert!(cert.edges.contains_key(&Edge::new(3, 4)));
        assert_eq!(cert.cut_designations[&0], [Edge::new(0, 1), Edge::new(0, 2)]);
    }

    #[test]
    fn small_stars_are_refused() {
        for s in [2, 3] {
            let star = g(s + 1, &(1..=s).map(|l| (0, l)).collect::<Vec<_>>());
            assert!(matches!(
                lemma_factor(&star, None),
                Err(Error::Precondition { .. })
            ));
        }
    }

    #[test]
    fn anchor_must_be_inner_vertex() {
        assert!(lemma_factor(&bowtie(), Some(2)).is_err());
        let cert = lemma_factor(&bowtie(), Some(4)).unwrap();
        assert_eq!(cert.u_designation.unwrap().vertex, 4);
    }

    #[test]
    fn degenerate_hosts_are_refused() {
        assert!(lemma_factor(&Graph::empty(1), None).is_err());
        assert!(lemma_factor(&g(2, &[(0, 1)]), None).is_err());
    }

    // Degree bookkeeping of the three attachment kinds, checked step by step.
    #[test]
    fn attachment_degree_arithmetic() {
        // Root triangle 0,1,2; at 2: leaves 7, 8 and triangles 2,3,4 and 2,5,6.
        let graph = g(
            9,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (2, 3),
                (3, 4),
                (2, 4),
                (2, 5),
                (5, 6),
                (2, 6),
                (2, 7),
                (2, 8),
            ],
        );
        let result = peel(&graph, None).unwrap();
        let kinds: Vec<Attach> = result.trace.iter().map(|s| s.attach).collect();
        assert_eq!(kinds, vec![Attach::Root, Attach::LeafPath, Attach::Splice]);

        // Replay and compare degrees before and after every step.
        let mut f = FactorEdges::default();
        let mut before = degrees(&graph, &f);
        for step in &result.trace {
            for &e in &step.added {
                f.add(e).unwrap();
            }
            for &e in &step.removed {
                if f.contains(e) {
                    f.remove(e).unwrap();
                }
            }
            let after = degrees(&graph, &f);
            match step.attach {
                Attach::Root => assert!(after.iter().zip(&before).all(|(a, b)| *a >= *b)),
                Attach::LeafPath => {
                    let v = step.cut_vertex.unwrap();
                    assert_eq!(after[v], before[v] + 2);
                    assert_eq!((after[7], after[8]), (2, 2));
                }
                Attach::Splice => {
                    let v = step.cut_vertex.unwrap();
                    assert_eq!(after[v], before[v]);
                    assert_eq!(after[v], 4);
                    // Endpoints of the removed edges keep their degree.
                    for e in &step.removed {
                        let w = e.other(v);
                        assert_eq!(after[w], 2);
                    }
                }
                Attach::Disjoint => unreachable!(),
            }
            before = after;
        }
        assert_eq!(degrees(&graph, &result.factor), degrees(&graph, &f));
    }

    #[test]
    fn disjoint_attach_adds_two_at_cut_vertex() {
        let result = peel(&bowtie(), None).unwrap();
        assert_eq!(result.trace[1].attach, Attach::Disjoint);
        assert_eq!(result.trace[1].removed.len(), 0);
        assert_eq!(result.factor.degree(2), 4);
    }
}

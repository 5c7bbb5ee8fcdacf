//! [2,4]-factors for graphs whose bad leaves are pairwise at distance 3 or
//! at least 5.
//!
//! Bad leaves are deleted, the rest is handled by [`lemma_factor`], and each
//! bad leaf `x` with neighbor `y` is threaded back in:
//!
//! * leaves whose neighbors are adjacent come in cliques and are woven in by
//!   a matching on the clique (every `x` and `y` gains two);
//! * [`LeafCase::Swap`]: `y z` is an original factor edge; replace it by the
//!   path `y x z`;
//! * [`LeafCase::Triangle`]: `y` has a non-cut neighbor `z`; add the triangle
//!   `x y z`;
//! * [`LeafCase::Relay`]: every neighbor of `y` is a cut vertex of the
//!   reduced graph. Pick one, `z`, and a designated edge `z z'`; replace it
//!   by the path `z x y z'`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result, Violation};
use crate::graph::{Edge, Graph};
use crate::structure::{classify, decompose, strip, StructureClassification, Stripped};

use super::certificate::{CertificateKind, FactorCertificate, FactorEdges};
use super::lemma::{basic_shape, lemma_factor, star_leaves};

const THEOREM: &str =
    "graph without non-trivial bridges and without bad leaves at distance 4 required";

/// Lists the violated hypotheses; an empty list means the graph qualifies.
///
/// Two distinct bad leaves closer than 3 contradict the definitions and are
/// reported as an internal error.
pub fn check_theorem_preconditions(
    g: &Graph,
    cls: &StructureClassification,
) -> Result<Vec<Violation>> {
    let mut violations: Vec<Violation> = cls
        .nontrivial_bridges
        .iter()
        .map(|&edge| Violation::NonTrivialBridge { edge })
        .collect();
    for &first in &cls.bad_leaves {
        let dist = g.distances_from(first);
        for &second in cls.bad_leaves.range(first + 1..) {
            match dist[second] {
                Some(4) => violations.push(Violation::BadLeavesAtDistanceFour { first, second }),
                Some(d) if d < 3 => {
                    return Err(Error::internal(format!(
                        "bad leaves {first} and {second} at distance {d}"
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(violations)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum LeafCase {
    Swap,
    Triangle,
    Relay,
}

/// How one bad leaf outside the cliques is attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafRecord {
    pub case: LeafCase,
    pub leaf: usize,
    pub neighbor: usize,
    pub partner: usize,
    /// Far end of the designated edge replaced in the relay case.
    pub relay: Option<usize>,
}

/// Reattachment plan for the bad leaves, in host ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BadLeafPlan {
    pub bad_leaves: BTreeSet<usize>,
    /// Bad leaves whose neighbor is adjacent to another bad leaf's neighbor.
    pub clustered: BTreeSet<usize>,
    /// Neighbor sets of the clustered leaves, each a clique of the host.
    pub cliques: Vec<Vec<usize>>,
    pub matchings: Vec<Vec<Edge>>,
    pub records: Vec<LeafRecord>,
    pub added: BTreeMap<&'static str, Vec<Edge>>,
    pub removed: BTreeMap<&'static str, Vec<Edge>>,
}

impl BadLeafPlan {
    fn lines(&self) -> Vec<String> {
        vec![serde_json::to_string(self).unwrap_or_else(|e| e.to_string())]
    }

    fn add(&mut self, set: &'static str, e: Edge) {
        self.added.entry(set).or_default().push(e);
    }

    fn remove(&mut self, set: &'static str, e: Edge) {
        self.removed.entry(set).or_default().push(e);
    }
}

/// Plans the reattachment of every bad leaf of `g`. `f_prime` is the lemma
/// certificate of `stripped.graph`, the graph with all bad leaves removed.
pub fn plan_bad_leaves(
    g: &Graph,
    stripped: &Stripped,
    f_prime: &FactorCertificate,
) -> Result<BadLeafPlan> {
    let cls = classify(g, &decompose(g)?);
    let reduced = &stripped.graph;
    let host = |v: usize| stripped.old_of_new[v];
    let lift = |e: Edge| Edge::new(host(e.lo()), host(e.hi()));
    let reduced_cut: BTreeSet<usize> = decompose(reduced)?
        .cut_vertices
        .iter()
        .map(|&v| host(v))
        .collect();
    let factor: BTreeSet<Edge> = f_prime.edges.keys().map(|&e| lift(e)).collect();
    let designated: BTreeMap<usize, [Edge; 2]> = f_prime
        .cut_designations
        .iter()
        .map(|(&v, pair)| (host(v), pair.map(lift)))
        .collect();

    let mut plan = BadLeafPlan {
        bad_leaves: cls.bad_leaves.clone(),
        ..Default::default()
    };
    let neighbor_of = |x: usize| g.neighbors(x)[0];
    let leaf_of: BTreeMap<usize, usize> = cls.bad_leaves.iter().map(|&x| (neighbor_of(x), x)).collect();
    let factor_degree = |v: usize| factor.iter().filter(|e| e.contains(v)).count();
    for &y in leaf_of.keys() {
        if factor_degree(y) != 2 {
            return Err(Error::internal(format!(
                "bad-leaf neighbor {y} has degree {} in the reduced factor",
                factor_degree(y)
            )));
        }
    }

    // Cliques of adjacent bad-leaf neighbors.
    let mut seen = BTreeSet::new();
    for &y in leaf_of.keys() {
        if seen.contains(&y) || !g.neighbors(y).iter().any(|w| leaf_of.contains_key(w)) {
            continue;
        }
        let mut clique = vec![y];
        seen.insert(y);
        let mut i = 0;
        while i < clique.len() {
            for &w in g.neighbors(clique[i]) {
                if leaf_of.contains_key(&w) && seen.insert(w) {
                    clique.push(w);
                }
            }
            i += 1;
        }
        clique.sort_unstable();
        for (i, &a) in clique.iter().enumerate() {
            if let Some(&b) = clique[i + 1..].iter().find(|&&b| !g.has_edge(a, b)) {
                return Err(Error::Internal {
                    message: format!(
                        "neighbors {a} and {b} of clustered bad leaves are not adjacent"
                    ),
                    trace: plan.lines(),
                });
            }
        }
        let xs: Vec<usize> = clique.iter().map(|y| leaf_of[y]).collect();
        let t = clique.len();
        let mut matching = vec![Edge::new(xs[0], clique[0]), Edge::new(xs[t - 1], clique[t - 1])];
        for j in 0..t - 1 {
            matching.push(Edge::new(xs[j], clique[j + 1]));
            matching.push(Edge::new(xs[j + 1], clique[j]));
        }
        matching.sort_unstable();
        for &e in &matching {
            plan.add("E0", e);
        }
        plan.clustered.extend(xs);
        plan.cliques.push(clique);
        plan.matchings.push(matching);
    }

    let mut partners = BTreeSet::new();
    let mut gone: BTreeSet<Edge> = BTreeSet::new();
    let mut fresh: BTreeSet<Edge> = BTreeSet::new();
    let rest: Vec<usize> = cls
        .bad_leaves
        .iter()
        .copied()
        .filter(|x| !plan.clustered.contains(x))
        .collect();
    for x in rest {
        let y = neighbor_of(x);
        let others: Vec<usize> = g.neighbors(y).iter().copied().filter(|&w| w != x).collect();
        let swap = others
            .iter()
            .copied()
            .find(|&z| factor.contains(&Edge::new(y, z)));
        let record = if let Some(z) = swap {
            let yz = Edge::new(y, z);
            plan.add("E1", Edge::new(x, y));
            plan.add("E1", Edge::new(x, z));
            plan.remove("E1'", yz);
            gone.insert(yz);
            LeafRecord { case: LeafCase::Swap, leaf: x, neighbor: y, partner: z, relay: None }
        } else if let Some(z) = others.iter().copied().find(|z| !reduced_cut.contains(z)) {
            plan.add("E2", Edge::new(x, y));
            plan.add("E2", Edge::new(x, z));
            plan.add("E2", Edge::new(y, z));
            fresh.insert(Edge::new(y, z));
            LeafRecord { case: LeafCase::Triangle, leaf: x, neighbor: y, partner: z, relay: None }
        } else {
            let z = others[0];
            let Some(own) = designated.get(&z).copied() else {
                return Err(Error::Internal {
                    message: format!("cut vertex {z} of the reduced graph has no designated edges"),
                    trace: plan.lines(),
                });
            };
            let usable = |e: &Edge| {
                let far = e.other(z);
                far != y
                    && g.contains_edge(*e)
                    && factor.contains(e)
                    && !gone.contains(e)
                    && !factor.contains(&Edge::new(y, far))
                    && !fresh.contains(&Edge::new(y, far))
            };
            let mut from_pair: Vec<Edge> = own.iter().copied().filter(|e| e.contains(z) && usable(e)).collect();
            from_pair.sort_by_key(|e| e.other(z));
            let Some(zz) = from_pair.first().copied() else {
                return Err(Error::Internal {
                    message: format!("no designated edge at {z} usable for bad leaf {x}"),
                    trace: plan.lines(),
                });
            };
            let far = zz.other(z);
            plan.add("E3", Edge::new(x, y));
            plan.add("E3", Edge::new(x, z));
            plan.add("E3", Edge::new(y, far));
            plan.remove("E3'", zz);
            gone.insert(zz);
            fresh.insert(Edge::new(y, far));
            LeafRecord { case: LeafCase::Relay, leaf: x, neighbor: y, partner: z, relay: Some(far) }
        };
        if leaf_of.contains_key(&record.partner) || !partners.insert(record.partner) {
            let message = format!(
                "partner {} of bad leaf {x} is shared or next to a bad leaf",
                record.partner
            );
            plan.records.push(record);
            return Err(Error::Internal { message, trace: plan.lines() });
        }
        plan.records.push(record);
    }
    plan.records.sort_by_key(|r| (r.case as u8, r.leaf));
    Ok(plan)
}

/// Builds a [2,4]-factor of `g`'s square. Designations are not carried over;
/// the result is a plain factor.
pub fn build_factor(g: &Graph) -> Result<FactorCertificate> {
    let precondition = |violations| Error::Precondition {
        context: THEOREM,
        violations,
    };
    basic_shape(g).map_err(|v| precondition(vec![v]))?;
    let bct = decompose(g)?;
    let cls = classify(g, &bct);
    let violations = check_theorem_preconditions(g, &cls)?;
    if !violations.is_empty() {
        return Err(precondition(violations));
    }
    if let Some(s @ (2 | 3)) = star_leaves(g) {
        return Ok(small_star_cycle(g, s));
    }
    if cls.bad_leaves.is_empty() {
        let mut cert = lemma_factor(g, None)?;
        cert.kind = CertificateKind::Theorem;
        cert.cut_designations.clear();
        return Ok(cert);
    }

    let bad: Vec<usize> = cls.bad_leaves.iter().copied().collect();
    let stripped = strip(g, &bad)?;
    let f_prime = lemma_factor(&stripped.graph, None).map_err(|e| match e {
        Error::Precondition { violations, .. } => Error::internal(format!(
            "graph without its bad leaves fails the lemma hypotheses: {violations:?}"
        )),
        other => other,
    })?;
    let plan = plan_bad_leaves(g, &stripped, &f_prime)?;

    let mut factor = FactorEdges::default();
    let attach = |r: Result<()>| {
        r.map_err(|e| match e {
            Error::Internal { message, .. } => Error::Internal {
                message,
                trace: plan.lines(),
            },
            other => other,
        })
    };
    for &e in f_prime.edges.keys() {
        attach(factor.add(Edge::new(stripped.old_of_new[e.lo()], stripped.old_of_new[e.hi()])))?;
    }
    for edges in plan.removed.values() {
        for &e in edges {
            attach(factor.remove(e))?;
        }
    }
    for edges in plan.added.values() {
        for &e in edges {
            attach(factor.add(e))?;
        }
    }
    let cert = FactorCertificate {
        kind: CertificateKind::Theorem,
        edges: factor.tagged(g),
        host: g.clone(),
        u_designation: None,
        cut_designations: BTreeMap::new(),
    };
    if let Some(v) = cert.degrees().iter().position(|&d| d != 2 && d != 4) {
        return Err(Error::Internal {
            message: format!("vertex {v} has degree {} after reattachment", cert.degree(v)),
            trace: plan.lines(),
        });
    }
    Ok(cert)
}

/// K_{1,2} and K_{1,3} have Hamiltonian squares.
fn small_star_cycle(g: &Graph, s: usize) -> FactorCertificate {
    let center = (0..g.n()).find(|&v| g.degree(v) == s).expect("star center");
    let mut walk = vec![center];
    walk.extend(g.neighbors(center));
    let mut factor = FactorEdges::default();
    for i in 0..walk.len() {
        factor
            .add(Edge::new(walk[i], walk[(i + 1) % walk.len()]))
            .expect("cycle edges are distinct");
    }
    FactorCertificate {
        kind: CertificateKind::Theorem,
        edges: factor.tagged(g),
        host: g.clone(),
        u_designation: None,
        cut_designations: BTreeMap::new(),
    }
}

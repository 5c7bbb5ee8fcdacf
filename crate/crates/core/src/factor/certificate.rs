use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, GraphJson, Origin};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CertificateKind {
    /// Carries designated edge pairs for `u` and every cut vertex.
    Lemma,
    /// A plain [2,4]-factor of the square.
    Theorem,
}

/// A vertex and the two factor edges designated at it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Designation {
    pub vertex: usize,
    pub edges: [Edge; 2],
}

/// A factor of `host`'s square together with the designated edges that
/// witness its structural properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCertificate {
    pub kind: CertificateKind,
    pub host: Graph,
    pub edges: BTreeMap<Edge, Origin>,
    pub u_designation: Option<Designation>,
    pub cut_designations: BTreeMap<usize, [Edge; 2]>,
}

impl FactorCertificate {
    pub fn degree(&self, v: usize) -> usize {
        self.edges.keys().filter(|e| e.contains(v)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.host.n()];
        for e in self.edges.keys() {
            deg[e.lo()] += 1;
            deg[e.hi()] += 1;
        }
        deg
    }

    pub fn tagged_edges(&self) -> Vec<(Edge, Origin)> {
        self.edges.iter().map(|(&e, &o)| (e, o)).collect()
    }

    pub fn square_only_count(&self) -> usize {
        self.edges.values().filter(|&&o| o == Origin::Square).count()
    }

    /// DOT rendering over the host's vertices, square-only edges dashed.
    pub fn to_dot(&self) -> String {
        let edges: Vec<(Edge, bool)> = self
            .edges
            .iter()
            .map(|(&e, &o)| (e, o == Origin::Square))
            .collect();
        self.host.dot_with(&edges)
    }

    pub fn to_json(&self) -> CertificateJson {
        let h = &self.host;
        let pair = |e: Edge| [h.label(e.lo()), h.label(e.hi())];
        CertificateJson {
            kind: self.kind,
            host: h.to_json(),
            edges: self
                .edges
                .iter()
                .map(|(&e, &origin)| TaggedEdgeJson {
                    ends: pair(e),
                    origin,
                })
                .collect(),
            u: self.u_designation.map(|d| DesignationJson {
                vertex: h.label(d.vertex),
                edges: d.edges.map(pair),
            }),
            cut_designations: self
                .cut_designations
                .iter()
                .map(|(&v, edges)| DesignationJson {
                    vertex: h.label(v),
                    edges: edges.map(pair),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedEdgeJson {
    pub ends: [u64; 2],
    pub origin: Origin,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignationJson {
    pub vertex: u64,
    pub edges: [[u64; 2]; 2],
}

/// Certificate in caller labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateJson {
    pub kind: CertificateKind,
    pub host: GraphJson,
    pub edges: Vec<TaggedEdgeJson>,
    #[serde(default)]
    pub u: Option<DesignationJson>,
    #[serde(default)]
    pub cut_designations: Vec<DesignationJson>,
}

impl CertificateJson {
    /// Rebuilds the certificate. Tags are taken as given, so a tampered tag
    /// survives the round trip and is caught by verification.
    pub fn to_certificate(&self) -> Result<FactorCertificate> {
        let host = self.host.to_graph()?;
        let ids: HashMap<u64, usize> = (0..host.n()).map(|v| (host.label(v), v)).collect();
        let vertex = |l: u64| -> Result<usize> {
            ids.get(&l)
                .copied()
                .ok_or_else(|| Error::Argument(format!("unknown vertex label {l}")))
        };
        let edge = |[a, b]: [u64; 2]| -> Result<Edge> {
            let (u, v) = (vertex(a)?, vertex(b)?);
            if u == v {
                return Err(Error::Argument(format!("self-loop {a}-{b} in certificate")));
            }
            Ok(Edge::new(u, v))
        };
        let mut edges = BTreeMap::new();
        for t in &self.edges {
            if edges.insert(edge(t.ends)?, t.origin).is_some() {
                return Err(Error::Argument(format!(
                    "edge {}-{} listed twice",
                    t.ends[0], t.ends[1]
                )));
            }
        }
        let designation = |d: &DesignationJson| -> Result<Designation> {
            Ok(Designation {
                vertex: vertex(d.vertex)?,
                edges: [edge(d.edges[0])?, edge(d.edges[1])?],
            })
        };
        let u_designation = self.u.as_ref().map(designation).transpose()?;
        let mut cut_designations = BTreeMap::new();
        for d in &self.cut_designations {
            let d = designation(d)?;
            cut_designations.insert(d.vertex, d.edges);
        }
        Ok(FactorCertificate {
            kind: self.kind,
            host,
            edges,
            u_designation,
            cut_designations,
        })
    }
}

/// Mutable edge set used while a factor is assembled. Adding an edge that is
/// present, or removing one that is absent, is an invariant breach.
#[derive(Debug, Clone, Default)]
pub(crate) struct FactorEdges {
    set: BTreeSet<Edge>,
}

impl FactorEdges {
    pub(crate) fn add(&mut self, e: Edge) -> Result<()> {
        if self.set.insert(e) {
            Ok(())
        } else {
            Err(Error::internal(format!("edge {e} added twice")))
        }
    }

    pub(crate) fn remove(&mut self, e: Edge) -> Result<()> {
        if self.set.remove(&e) {
            Ok(())
        } else {
            Err(Error::internal(format!("edge {e} removed but not present")))
        }
    }

    #[cfg(test)]
    pub(crate) fn contains(&self, e: Edge) -> bool {
        self.set.contains(&e)
    }

    pub(crate) fn edges_at(&self, v: usize) -> Vec<Edge> {
        self.set.iter().copied().filter(|e| e.contains(v)).collect()
    }

    pub(crate) fn degree(&self, v: usize) -> usize {
        self.set.iter().filter(|e| e.contains(v)).count()
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.set.iter().copied()
    }

    pub(crate) fn tagged(&self, host: &Graph) -> BTreeMap<Edge, Origin> {
        self.set.iter().map(|&e| (e, host.origin_of(e))).collect()
    }
}

use serde::Serialize;
use thiserror::Error;

use crate::graph::Edge;

/// A single reason why a graph falls outside the hypotheses of a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Violation {
    Disconnected,
    /// Graphs with fewer than two edges have no even factor in their square.
    Degenerate { vertices: usize, edges: usize },
    NonTrivialBridge { edge: Edge },
    BadLeaf { vertex: usize },
    BadLeavesAtDistanceFour { first: usize, second: usize },
    /// `u` must be neither a cut vertex nor a leaf.
    InvalidAnchor { vertex: usize },
    NotTwoConnected,
    /// K_{1,2} and K_{1,3} have no factor with a degree-4 vertex.
    SmallStar { leaves: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Disconnected => write!(f, "graph is disconnected"),
            Violation::Degenerate { vertices, edges } => {
                write!(f, "degenerate graph ({vertices} vertices, {edges} edges)")
            }
            Violation::NonTrivialBridge { edge } => write!(f, "non-trivial bridge {edge}"),
            Violation::BadLeaf { vertex } => write!(f, "bad leaf {vertex}"),
            Violation::BadLeavesAtDistanceFour { first, second } => {
                write!(f, "bad leaves {first} and {second} at distance 4")
            }
            Violation::InvalidAnchor { vertex } => {
                write!(f, "vertex {vertex} is a cut vertex or a leaf")
            }
            Violation::NotTwoConnected => write!(f, "graph is not 2-connected"),
            Violation::SmallStar { leaves } => write!(f, "graph is the star K_1,{leaves}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("{context}: {} violation(s): {}", violations.len(), join(violations))]
    Precondition {
        context: &'static str,
        violations: Vec<Violation>,
    },

    #[error("search budget of {budget} nodes exhausted ({explored} explored)")]
    Budget {
        budget: u64,
        explored: u64,
        /// Longest partial structure reached before giving up.
        partial: Vec<usize>,
    },

    #[error("internal invariant violated: {message}")]
    Internal { message: String, trace: Vec<String> },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn internal(message: impl Into<String>) -> Self {
        Error::Internal {
            message: message.into(),
            trace: Vec::new(),
        }
    }
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

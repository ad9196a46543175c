//! Locally checkable labeling problems given by a radius and a verifier.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::algorithms::{MIS_IN, MIS_OUT};
use super::structured::{RootedBall, StructuredGraph};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};

pub type Verifier = Arc<dyn Fn(&RootedBall) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct LclProblem {
    pub name: String,
    pub radius: usize,
    pub verifier: Verifier,
}

impl fmt::Debug for LclProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LclProblem").field("name", &self.name).field("radius", &self.radius).finish()
    }
}

impl LclProblem {
    pub fn new(name: impl Into<String>, radius: usize, verifier: impl Fn(&RootedBall) -> bool + Send + Sync + 'static) -> Self {
        LclProblem { name: name.into(), radius, verifier: Arc::new(verifier) }
    }

    pub fn verify(&self, ball: &RootedBall) -> bool {
        (self.verifier)(ball)
    }

    /// Every labeling is accepted.
    pub fn always_true() -> Self {
        LclProblem::new("always-true", 0, |_| true)
    }

    /// `f(v) < q` and `f(u) != f(v)` for every neighbor `u`.
    pub fn proper_coloring(q: u64) -> Self {
        LclProblem::new(format!("proper-coloring({q})"), 1, move |b| {
            let c = b.label(b.root());
            c < q && b.neighbors(b.root()).iter().all(|&u| b.label(u) != c)
        })
    }

    /// Labels differ across every edge, with no bound on their range.
    pub fn distinct_labels() -> Self {
        LclProblem::new("distinct-labels", 1, |b| {
            let c = b.label(b.root());
            b.neighbors(b.root()).iter().all(|&u| b.label(u) != c)
        })
    }

    /// Every vertex has a neighbor with a different label.
    pub fn weak_coloring() -> Self {
        LclProblem::new("weak-coloring", 1, |b| {
            let c = b.label(b.root());
            b.neighbors(b.root()).iter().any(|&u| b.label(u) != c)
        })
    }

    /// Maximal independent set with outputs `1` (in) and `0` (out).
    pub fn mis() -> Self {
        LclProblem::new("mis", 1, |b| {
            let r = b.root();
            let nb = b.neighbors(r);
            match b.label(r) {
                MIS_IN => nb.iter().all(|&u| b.label(u) != MIS_IN),
                MIS_OUT => nb.iter().any(|&u| b.label(u) == MIS_IN),
                _ => false,
            }
        })
    }

    /// Sinkless orientation on a subdivided graph (see [`subdivide`]): every
    /// vertex node has an outgoing edge. Edge nodes always accept.
    pub fn sinkless_orientation() -> Self {
        LclProblem::new("sinkless-orientation", 1, |b| {
            let r = b.root();
            if b.sigma_get(&[r]) == Some(EDGE_NODE) {
                return true;
            }
            b.neighbors(r).iter().any(|&e| {
                let toward_choice = b.label(e) == 0;
                let v_is_choice = b.sigma_get(&[e, r]) == Some(1);
                toward_choice != v_is_choice
            })
        })
    }
}

pub const VERTEX_NODE: u64 = 0;
pub const EDGE_NODE: u64 = 1;

/// A graph with each edge replaced by a node adjacent to its endpoints.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub structured: StructuredGraph,
    /// Node id of each edge of the original graph, by edge index.
    pub edge_node: Vec<usize>,
    pub edges: Vec<EdgeId>,
}

impl Subdivision {
    /// Reads an orientation off edge-node outputs: `true` means the edge
    /// points toward its chosen endpoint.
    pub fn orientation(&self, outputs: &[u64]) -> Vec<bool> {
        self.edge_node.iter().map(|&x| outputs[x] == 0).collect()
    }
}

/// Subdivides `graph`. Vertex nodes keep their ids `0..n`, the node for edge
/// `i` is `n + i`. Structure: `σ(x) = 0` on vertex nodes, `σ(x) = 1` on edge
/// nodes, and `σ(e, c(e)) = 1` marks the chosen endpoint of each edge.
pub fn subdivide(graph: &Graph, choice: impl Fn(&EdgeId) -> usize) -> Result<Subdivision> {
    let n = graph.n();
    let edges = graph.edges();
    let mut pairs = Vec::with_capacity(2 * edges.len());
    let mut sigma = BTreeMap::new();
    for v in 0..n {
        sigma.insert(vec![v], VERTEX_NODE);
    }
    let mut edge_node = Vec::with_capacity(edges.len());
    for e in &edges {
        let x = n + e.index;
        let c = choice(e);
        if !e.contains(c) {
            return Err(Error::InvalidInput(format!("choice {c} is not an endpoint of edge ({}, {})", e.u, e.v)));
        }
        pairs.push((e.u, x));
        pairs.push((e.v, x));
        sigma.insert(vec![x], EDGE_NODE);
        sigma.insert(vec![x, c], 1);
        edge_node.push(x);
    }
    let g = Graph::from_edges(n + edges.len(), &pairs)?;
    Ok(Subdivision { structured: StructuredGraph::new(g, sigma, 2)?, edge_node, edges })
}

/// Out-degrees of an orientation given as "points toward `choice(e)`" flags.
pub fn out_degrees(n: usize, edges: &[EdgeId], choice: impl Fn(&EdgeId) -> usize, toward_choice: &[bool]) -> Vec<usize> {
    let mut out = vec![0; n];
    for (e, &t) in edges.iter().zip(toward_choice) {
        let c = choice(e);
        let head = if t { c } else { e.other(c) };
        out[e.other(head)] += 1;
    }
    out
}

/// Vertices with no outgoing edge.
pub fn sinks(n: usize, edges: &[EdgeId], choice: impl Fn(&EdgeId) -> usize, toward_choice: &[bool]) -> BTreeSet<usize> {
    out_degrees(n, edges, choice, toward_choice).into_iter().enumerate().filter(|&(_, d)| d == 0).map(|(v, _)| v).collect()
}

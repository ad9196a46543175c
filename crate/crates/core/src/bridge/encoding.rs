//! Encoding a CSP whose dependency graph sits inside `G` as structure on `G`.
//!
//! Each domain becomes the ascending tuple `v` of its variables. The
//! constraints sharing that underlying set, rewritten positionally
//! (`v_i ↦ i`), form `type(v)`; the structure map stores `code(type(v))`, the
//! index of the type in first-seen order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::csp::{Color, Constraint, Csp};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::StructuredGraph;

/// Sorted multiset of positional forbidden sets.
pub type ConstraintType = Vec<BTreeSet<Vec<Color>>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphCspEncoding {
    pub q: u32,
    pub sigma: BTreeMap<Vec<usize>, u64>,
    /// `types[code]`.
    pub types: Vec<ConstraintType>,
}

impl GraphCspEncoding {
    pub fn structured(&self, graph: &Graph) -> Result<StructuredGraph> {
        let arity = self.sigma.keys().map(Vec::len).max().unwrap_or(0);
        StructuredGraph::new(graph.clone(), self.sigma.clone(), arity)
    }
}

pub fn encode_graph_csp(graph: &Graph, csp: &Csp) -> Result<GraphCspEncoding> {
    if csp.universe() != graph.n() {
        return Err(Error::InvalidInput(format!("CSP has {} variables, graph has {} vertices", csp.universe(), graph.n())));
    }
    if csp.constraints().iter().any(|b| b.domain().is_empty()) {
        return Err(Error::InvalidInput("constraints with empty domain have no tuple to carry them".into()));
    }
    if !csp.dependency_graph().is_subgraph_of(graph) {
        return Err(Error::InvalidInput("dependency graph of the CSP is not a subgraph of the graph".into()));
    }
    let mut grouped: BTreeMap<Vec<usize>, ConstraintType> = BTreeMap::new();
    for b in csp.constraints() {
        let b = b.normalized();
        grouped.entry(b.domain().to_vec()).or_default().push(b.forbidden().clone());
    }
    let mut types: Vec<ConstraintType> = Vec::new();
    let mut sigma = BTreeMap::new();
    for (tuple, mut ty) in grouped {
        ty.sort();
        let code = match types.iter().position(|t| *t == ty) {
            Some(c) => c,
            None => {
                types.push(ty);
                types.len() - 1
            }
        };
        sigma.insert(tuple, code as u64);
    }
    Ok(GraphCspEncoding { q: csp.q(), sigma, types })
}

/// Inverse of [`encode_graph_csp`]; yields the normalized CSP.
pub fn decode_graph_csp(graph: &Graph, enc: &GraphCspEncoding) -> Result<Csp> {
    let mut constraints = Vec::new();
    for (tuple, &code) in &enc.sigma {
        let ty = enc
            .types
            .get(code as usize)
            .ok_or_else(|| Error::InvalidInput(format!("unknown type code {code}")))?;
        for forbidden in ty {
            constraints.push(Constraint::new(tuple.clone(), forbidden.iter().cloned(), enc.q)?);
        }
    }
    Csp::new(graph.n(), enc.q, constraints)
}

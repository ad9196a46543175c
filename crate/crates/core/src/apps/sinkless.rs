//! Sinkless orientation as a CSP over the edges.
//!
//! Variables are edge indices of [`Graph::edges`]. Edge `e` points towards
//! `c(e)` exactly when its color is 0.

use serde::Serialize;

use crate::csp::{Color, Constraint, Csp, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};

/// `c(e)` for every edge index.
pub type EndpointChoice = Vec<usize>;

/// Every edge chooses its larger endpoint.
pub fn default_choice(graph: &Graph) -> EndpointChoice {
    graph.edges().iter().map(|e| e.v).collect()
}

fn check_choice(graph: &Graph, choice: &[usize]) -> Result<Vec<EdgeId>> {
    let edges = graph.edges();
    if choice.len() != edges.len() {
        return Err(Error::InvalidInput(format!("choice has {} entries for {} edges", choice.len(), edges.len())));
    }
    if let Some(e) = edges.iter().find(|e| !e.contains(choice[e.index])) {
        return Err(Error::InvalidInput(format!("edge {} = ({}, {}) chooses vertex {}", e.index, e.u, e.v, choice[e.index])));
    }
    Ok(edges)
}

/// `B_v` forbids the single tuple in which every edge at `v` points into `v`.
pub fn sinkless_orientation_csp(graph: &Graph, choice: &[usize]) -> Result<Csp> {
    let edges = check_choice(graph, choice)?;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); graph.n()];
    for e in &edges {
        incident[e.u].push(e.index);
        incident[e.v].push(e.index);
    }
    let mut cons = Vec::with_capacity(graph.n());
    for (v, dom) in incident.into_iter().enumerate() {
        if dom.is_empty() {
            return Err(Error::InvalidGraph(format!("vertex {v} is isolated")));
        }
        let into_v: Vec<Color> = dom.iter().map(|&e| if choice[e] == v { 0 } else { 1 }).collect();
        cons.push(Constraint::new(dom, [into_v], 2)?);
    }
    Csp::new(edges.len(), 2, cons)
}

/// Edge `(tail, head)` per edge index.
pub fn decode_orientation(graph: &Graph, choice: &[usize], f: &PartialColoring) -> Result<Vec<(usize, usize)>> {
    let edges = check_choice(graph, choice)?;
    edges
        .iter()
        .map(|e| {
            let color = f.get(e.index).ok_or(Error::NotTotal(e.index))?;
            let head = if color == 0 { choice[e.index] } else { e.other(choice[e.index]) };
            Ok((e.other(head), head))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SinklessCheck {
    pub ok: bool,
    pub sinks: Vec<usize>,
    pub out_degrees: Vec<usize>,
}

pub fn verify_sinkless(graph: &Graph, orientation: &[(usize, usize)]) -> Result<SinklessCheck> {
    let edges = graph.edge_pairs();
    if orientation.len() != edges.len() {
        return Err(Error::InvalidInput(format!("orientation has {} arcs for {} edges", orientation.len(), edges.len())));
    }
    let mut out_degrees = vec![0; graph.n()];
    for (&(a, b), &(u, v)) in orientation.iter().zip(&edges) {
        if (a.min(b), a.max(b)) != (u, v) {
            return Err(Error::InvalidInput(format!("arc ({a}, {b}) does not match edge ({u}, {v})")));
        }
        out_degrees[a] += 1;
    }
    let sinks: Vec<usize> = (0..graph.n()).filter(|&v| out_degrees[v] == 0).collect();
    Ok(SinklessCheck { ok: sinks.is_empty(), sinks, out_degrees })
}

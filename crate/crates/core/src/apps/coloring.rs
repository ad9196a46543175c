//! Vertex colorings: the proper-coloring CSP, palette-offset unions and
//! colorings built around an independent complete section.

use std::collections::VecDeque;

use serde::Serialize;

use crate::csp::{Color, Constraint, Csp};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// One constraint per edge forbidding the `q` monochromatic pairs.
pub fn proper_coloring_csp(graph: &Graph, q: u32) -> Result<Csp> {
    if q == 0 {
        return Err(Error::InvalidInput("q must be at least 1".into()));
    }
    let cons = graph
        .edge_pairs()
        .into_iter()
        .map(|(u, v)| Constraint::new(vec![u, v], (0..q).map(|c| vec![c, c]), q))
        .collect::<Result<Vec<_>>>()?;
    Csp::new(graph.n(), q, cons)
}

/// Edges `(u, v)` with equal colors.
pub fn coloring_conflicts(graph: &Graph, colors: &[Color]) -> Vec<(usize, usize)> {
    graph.edge_pairs().into_iter().filter(|&(u, v)| colors[u] == colors[v]).collect()
}

pub fn is_proper_coloring(graph: &Graph, colors: &[Color]) -> bool {
    colors.len() == graph.n() && coloring_conflicts(graph, colors).is_empty()
}

/// A coloring of `G[vertices]` using colors below `palette`; `colors` is
/// aligned with the sorted vertex list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoredPart {
    pub vertices: VertexSet,
    pub colors: Vec<Color>,
    pub palette: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnionColoring {
    pub colors: Vec<Color>,
    pub palette: u32,
}

/// Shifts part `i` by the palettes of parts `0..i` and glues the results.
pub fn union_coloring(graph: &Graph, parts: &[ColoredPart]) -> Result<UnionColoring> {
    let n = graph.n();
    let mut colors: Vec<Option<Color>> = vec![None; n];
    let mut offset = 0u32;
    for (i, part) in parts.iter().enumerate() {
        part.vertices.check_bounds(n)?;
        if part.colors.len() != part.vertices.len() {
            return Err(Error::InvalidInput(format!("part {i} has {} colors for {} vertices", part.colors.len(), part.vertices.len())));
        }
        for (v, &c) in part.vertices.iter().zip(&part.colors) {
            if c >= part.palette {
                return Err(Error::InvalidInput(format!("part {i} uses color {c} outside its palette {}", part.palette)));
            }
            if colors[v].replace(offset + c).is_some() {
                return Err(Error::InvalidInput(format!("vertex {v} lies in two parts")));
            }
        }
        for (u, v) in graph.edge_pairs() {
            if part.vertices.contains(u) && part.vertices.contains(v) && colors[u] == colors[v] {
                return Err(Error::InvalidInput(format!("part {i} is not properly colored at edge ({u}, {v})")));
            }
        }
        offset += part.palette;
    }
    let colors = colors
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::InvalidInput(format!("vertex {v} is in no part"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(UnionColoring { colors, palette: offset })
}

/// Colors a graph in which every component has a vertex of degree below
/// `k`, using colors `0..k`: breadth-first order from such a vertex, then
/// greedy in reverse order.
pub fn degree_deficient_coloring(graph: &Graph, k: u32) -> Result<Vec<Color>> {
    let n = graph.n();
    let mut colors: Vec<Option<Color>> = vec![None; n];
    for comp in graph.components() {
        let start = comp
            .iter()
            .find(|&v| (graph.degree(v) as u32) < k)
            .ok_or_else(|| Error::Precondition(format!("component at {} has no vertex of degree below {k}", comp.as_slice()[0])))?;
        let mut order = vec![start];
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in graph.neighbors(x) {
                if !std::mem::replace(&mut seen[y], true) {
                    order.push(y);
                    queue.push_back(y);
                }
            }
        }
        for &v in order.iter().rev() {
            let c = (0..k)
                .find(|c| graph.neighbors(v).iter().all(|&u| colors[u] != Some(*c)))
                .ok_or_else(|| Error::AuditFailure(format!("no free color at vertex {v}")))?;
            colors[v] = Some(c);
        }
    }
    Ok(colors.into_iter().map(|c| c.unwrap()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionColoring {
    pub colors: Vec<Color>,
    pub palette: u32,
    /// `1 + Σ Δ(G[U_i])`.
    pub bound: u32,
}

/// Colors `section` with one reserved color and each `U_i \ section` with
/// `Δ(G[U_i])` colors.
pub fn section_coloring(graph: &Graph, parts: &[VertexSet], section: &VertexSet) -> Result<SectionColoring> {
    section.check_bounds(graph.n())?;
    if !graph.is_independent(section) {
        return Err(Error::Precondition("section is not independent".into()));
    }
    let mut colored = vec![ColoredPart { colors: vec![0; section.len()], vertices: section.clone(), palette: 1 }];
    let mut bound = 1u32;
    for (i, part) in parts.iter().enumerate() {
        let comps = graph.induced_components(part)?;
        if let Some(c) = comps.iter().find(|c| !c.intersects(section)) {
            return Err(Error::Precondition(format!("section misses the component at {} of part {i}", c.min().unwrap())));
        }
        let sub = graph.induced_subgraph(part)?;
        let delta = sub.graph.max_degree() as u32;
        bound += delta;
        let rest = part.difference(section);
        let inner = graph.induced_subgraph(&rest)?;
        let colors = degree_deficient_coloring(&inner.graph, delta)?;
        colored.push(ColoredPart { vertices: rest, colors, palette: delta });
    }
    let union = union_coloring(graph, &colored)?;
    if !is_proper_coloring(graph, &union.colors) {
        return Err(Error::AuditFailure("section coloring is not proper".into()));
    }
    Ok(SectionColoring { colors: union.colors, palette: union.palette, bound })
}

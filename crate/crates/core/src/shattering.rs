//! Finite partitions, shattering width and separation witnesses.

use serde::{Deserialize, Serialize};

use crate::csp::Csp;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// A cover of `0..universe` by pairwise disjoint nonempty classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitePartition {
    classes: Vec<VertexSet>,
}

impl FinitePartition {
    pub fn new(universe: usize, classes: Vec<VertexSet>) -> Result<Self> {
        let p = FinitePartition { classes };
        p.class_index(universe)?;
        Ok(p)
    }

    /// One class per variable.
    pub fn singletons(universe: usize) -> Self {
        FinitePartition { classes: (0..universe).map(|v| VertexSet::from_unsorted(vec![v])).collect() }
    }

    /// A single class holding everything (no classes when `universe == 0`).
    pub fn whole(universe: usize) -> Self {
        let classes = if universe == 0 { Vec::new() } else { vec![(0..universe).collect()] };
        FinitePartition { classes }
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Class index of every variable, validating that the classes partition
    /// `0..universe`.
    pub fn class_index(&self, universe: usize) -> Result<Vec<usize>> {
        let mut owner = vec![usize::MAX; universe];
        for (i, c) in self.classes.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidInput(format!("partition class {i} is empty")));
            }
            c.check_bounds(universe)?;
            for v in c.iter() {
                if owner[v] != usize::MAX {
                    return Err(Error::InvalidInput(format!("vertex {v} lies in classes {} and {i}", owner[v])));
                }
                owner[v] = i;
            }
        }
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidInput(format!("partition does not cover vertex {v}")));
        }
        Ok(owner)
    }
}

/// Number of classes met by each constraint domain.
pub fn classes_met(partition: &FinitePartition, csp: &Csp) -> Result<Vec<usize>> {
    let owner = partition.class_index(csp.universe())?;
    Ok(csp
        .constraints()
        .iter()
        .map(|b| {
            let mut met: Vec<usize> = b.domain().iter().map(|&v| owner[v]).collect();
            met.sort_unstable();
            met.dedup();
            met.len()
        })
        .collect())
}

/// Largest number of classes any constraint domain meets.
pub fn shattering_width(partition: &FinitePartition, csp: &Csp) -> Result<usize> {
    Ok(classes_met(partition, csp)?.into_iter().max().unwrap_or(0))
}

/// Parts `U_0, ..., U_s` of `V(G)` whose induced components stay within a
/// locality budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub parts: Vec<VertexSet>,
    pub budget: usize,
}

impl SeparationWitness {
    /// The index `s` (number of parts minus one).
    pub fn s(&self) -> usize {
        self.parts.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationCheck {
    pub ok: bool,
    pub largest_component: usize,
    /// The largest component when it exceeds the budget.
    pub offender: Option<VertexSet>,
}

fn check_parts_partition(n: usize, parts: &[VertexSet]) -> Result<()> {
    let mut seen = vec![false; n];
    for (i, part) in parts.iter().enumerate() {
        part.check_bounds(n)?;
        for v in part.iter() {
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidInput(format!("vertex {v} appears in more than one part (again in part {i})")));
            }
        }
    }
    match seen.iter().position(|&s| !s) {
        Some(v) => Err(Error::InvalidInput(format!("parts do not cover vertex {v}"))),
        None => Ok(()),
    }
}

/// Checks that every component of every `G[U_i]` has at most `budget` vertices.
pub fn verify_separation(graph: &Graph, parts: &[VertexSet], budget: usize) -> Result<SeparationCheck> {
    check_parts_partition(graph.n(), parts)?;
    let mut largest: Option<VertexSet> = None;
    for part in parts {
        for comp in graph.induced_components(part)? {
            if largest.as_ref().is_none_or(|l| comp.len() > l.len()) {
                largest = Some(comp);
            }
        }
    }
    let largest_component = largest.as_ref().map_or(0, VertexSet::len);
    let ok = largest_component <= budget;
    Ok(SeparationCheck { ok, largest_component, offender: if ok { None } else { largest } })
}

/// Classes are the connected components of the induced parts, ordered by
/// minimum vertex id.
pub fn partition_from_separation(graph: &Graph, witness: &SeparationWitness) -> Result<FinitePartition> {
    let check = verify_separation(graph, &witness.parts, witness.budget)?;
    if !check.ok {
        return Err(Error::InvalidInput(format!(
            "witness has a component of size {} over budget {}",
            check.largest_component, witness.budget
        )));
    }
    let mut classes = Vec::new();
    for part in &witness.parts {
        classes.extend(graph.induced_components(part)?);
    }
    classes.sort_by_key(|c| c.min());
    Ok(FinitePartition { classes })
}

/// Vertices of a path or cycle component in traversal order, plus whether it
/// closes up. Paths start at their smaller endpoint; cycles start at their
/// minimum vertex and step toward its smaller neighbor.
fn trace_component(graph: &Graph, comp: &VertexSet) -> Result<(Vec<usize>, bool)> {
    if let Some(v) = comp.iter().find(|&v| graph.degree(v) > 2) {
        return Err(Error::InvalidGraph(format!("vertex {v} has degree {}, not a path or cycle", graph.degree(v))));
    }
    let endpoint = comp.iter().find(|&v| graph.degree(v) < 2);
    let is_cycle = endpoint.is_none();
    let start = endpoint.unwrap_or_else(|| comp.min().unwrap());
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = graph.neighbors(cur).iter().copied().find(|&u| u != prev && u != start);
        match next {
            Some(u) if order.len() < comp.len() => {
                order.push(u);
                prev = cur;
                cur = u;
            }
            _ => break,
        }
    }
    Ok((order, is_cycle))
}

/// Two-part witness for disjoint unions of paths and cycles: alternating
/// blocks of at most `budget` vertices along each component.
pub fn interval_separation(graph: &Graph, budget: usize) -> Result<SeparationWitness> {
    if budget < 2 {
        return Err(Error::InvalidInput(format!("block length must be at least 2, got {budget}")));
    }
    let mut parts = [Vec::new(), Vec::new()];
    for comp in graph.components() {
        let (order, is_cycle) = trace_component(graph, &comp)?;
        let n = order.len();
        if is_cycle {
            if n < 2 * budget {
                return Err(Error::InvalidGraph(format!(
                    "cycle of length {n} is shorter than twice the block length {budget}"
                )));
            }
            let mut blocks = n.div_ceil(budget);
            if blocks % 2 == 1 {
                blocks += 1;
            }
            let mut at = 0;
            for b in 0..blocks {
                let size = n / blocks + usize::from(b < n % blocks);
                parts[b % 2].extend_from_slice(&order[at..at + size]);
                at += size;
            }
        } else {
            for (b, chunk) in order.chunks(budget).enumerate() {
                parts[b % 2].extend_from_slice(chunk);
            }
        }
    }
    let parts = parts.into_iter().map(VertexSet::from_unsorted).collect();
    Ok(SeparationWitness { parts, budget })
}

/// Witness for `grid(width, height)` from a brick tiling with `L x L` bricks,
/// odd brick rows shifted by `L / 2`, three-colored so same-colored bricks
/// never touch. Empty parts are dropped; the budget is `L^2`.
pub fn grid_separation(width: usize, height: usize, brick: usize) -> Result<SeparationWitness> {
    if brick < 2 {
        return Err(Error::InvalidInput(format!("brick side must be at least 2, got {brick}")));
    }
    let budget = brick * brick;
    if width <= brick && height <= brick {
        return Ok(SeparationWitness { parts: vec![(0..width * height).collect()], budget });
    }
    let shift = brick / 2;
    let mut parts = vec![Vec::new(); 3];
    for y in 0..height {
        let row = y / brick;
        let offset = if row % 2 == 1 { shift } else { 0 };
        for x in 0..width {
            let col = (x + offset) / brick;
            parts[(col + row % 2) % 3].push(y * width + x);
        }
    }
    let parts = parts.into_iter().filter(|p| !p.is_empty()).map(VertexSet::from_unsorted).collect();
    Ok(SeparationWitness { parts, budget })
}

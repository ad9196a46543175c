//! JSON file formats and DOT export.
//!
//! Every loader validates through the corresponding constructor, so a file
//! that parses is also well formed.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::apps::SchreierAction;
use crate::csp::{Color, Constraint, Csp};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::local::StructuredGraph;
use crate::shattering::{FinitePartition, SeparationWitness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        GraphFile { n: g.n(), edges: g.edge_pairs() }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edges(self.n, &self.edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintFile {
    pub domain: Vec<usize>,
    pub forbidden: Vec<Vec<Color>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CspFile {
    pub universe: usize,
    pub q: u32,
    pub constraints: Vec<ConstraintFile>,
}

impl CspFile {
    pub fn from_csp(csp: &Csp) -> Self {
        CspFile {
            universe: csp.universe(),
            q: csp.q(),
            constraints: csp
                .constraints()
                .iter()
                .map(|b| ConstraintFile { domain: b.domain().to_vec(), forbidden: b.forbidden().iter().cloned().collect() })
                .collect(),
        }
    }

    pub fn to_csp(&self) -> Result<Csp> {
        let cons = self
            .constraints
            .iter()
            .map(|c| Constraint::new(c.domain.clone(), c.forbidden.iter().cloned(), self.q))
            .collect::<Result<Vec<_>>>()?;
        Csp::new(self.universe, self.q, cons)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFile {
    pub classes: Vec<Vec<usize>>,
}

impl PartitionFile {
    pub fn from_partition(p: &FinitePartition) -> Self {
        PartitionFile { classes: p.classes().iter().map(|c| c.as_slice().to_vec()).collect() }
    }

    pub fn to_partition(&self, universe: usize) -> Result<FinitePartition> {
        FinitePartition::new(universe, self.classes.iter().cloned().map(VertexSet::from_unsorted).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub parts: Vec<Vec<usize>>,
    pub budget: usize,
}

impl WitnessFile {
    pub fn from_witness(w: &SeparationWitness) -> Self {
        WitnessFile { parts: w.parts.iter().map(|p| p.as_slice().to_vec()).collect(), budget: w.budget }
    }

    pub fn to_witness(&self, n: usize) -> Result<SeparationWitness> {
        let parts: Vec<VertexSet> = self.parts.iter().cloned().map(VertexSet::from_unsorted).collect();
        for p in &parts {
            p.check_bounds(n)?;
        }
        if self.budget == 0 {
            return Err(Error::InvalidInput("witness budget must be positive".into()));
        }
        Ok(SeparationWitness { parts, budget: self.budget })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaEntry {
    pub tuple: Vec<usize>,
    pub value: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredFile {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub arity: usize,
    #[serde(default)]
    pub sigma: Vec<SigmaEntry>,
}

impl StructuredFile {
    pub fn from_structured(sg: &StructuredGraph) -> Self {
        StructuredFile {
            n: sg.n(),
            edges: sg.graph().edge_pairs(),
            arity: sg.arity(),
            sigma: sg.sigma().iter().map(|(t, &v)| SigmaEntry { tuple: t.clone(), value: v }).collect(),
        }
    }

    pub fn to_structured(&self) -> Result<StructuredGraph> {
        let g = Graph::from_edges(self.n, &self.edges)?;
        let mut sigma = std::collections::BTreeMap::new();
        for e in &self.sigma {
            if sigma.insert(e.tuple.clone(), e.value).is_some() {
                return Err(Error::InvalidInput(format!("tuple {:?} listed twice", e.tuple)));
            }
        }
        StructuredGraph::new(g, sigma, self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelsFile {
    pub labels: Vec<u64>,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json(value)?)?;
    Ok(())
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    read_json::<GraphFile>(path)?.to_graph()
}

pub fn read_csp(path: &Path) -> Result<Csp> {
    read_json::<CspFile>(path)?.to_csp()
}

pub fn read_action(path: &Path) -> Result<SchreierAction> {
    let a: SchreierAction = read_json(path)?;
    a.validate()?;
    Ok(a)
}

const PALETTE: [&str; 12] = [
    "red", "blue", "green", "orange", "purple", "brown", "cyan", "magenta", "gold", "gray", "olive", "navy",
];

/// DOT text with optional vertex and per-edge-index colors.
pub fn to_dot(graph: &Graph, vertex_colors: Option<&[Color]>, edge_colors: Option<&[Color]>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..graph.n() {
        match vertex_colors {
            Some(c) => {
                let _ = writeln!(out, "  {v} [label=\"{v}:{}\", style=filled, fillcolor={}];", c[v], PALETTE[c[v] as usize % PALETTE.len()]);
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for e in graph.edges() {
        match edge_colors {
            Some(c) => {
                let col = c[e.index];
                let _ = writeln!(out, "  {} -- {} [label=\"{col}\", color={}];", e.u, e.v, PALETTE[col as usize % PALETTE.len()]);
            }
            None => {
                let _ = writeln!(out, "  {} -- {};", e.u, e.v);
            }
        }
    }
    out.push_str("}\n");
    out
}

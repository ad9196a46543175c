use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph with a sparse structure map from vertex tuples to naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredGraph {
    graph: Graph,
    sigma: BTreeMap<Vec<usize>, u64>,
    arity: usize,
    /// Keys of `sigma` mentioning each vertex.
    by_vertex: Vec<Vec<Vec<usize>>>,
}

impl StructuredGraph {
    pub fn new(graph: Graph, sigma: BTreeMap<Vec<usize>, u64>, arity: usize) -> Result<Self> {
        let mut by_vertex = vec![Vec::new(); graph.n()];
        for t in sigma.keys() {
            if t.is_empty() || t.len() > arity {
                return Err(Error::InvalidInput(format!("structure tuple {t:?} has arity outside 1..={arity}")));
            }
            for &v in t {
                if v >= graph.n() {
                    return Err(Error::VertexOutOfRange { vertex: v, n: graph.n() });
                }
            }
            let mut distinct = t.clone();
            distinct.sort_unstable();
            distinct.dedup();
            for v in distinct {
                by_vertex[v].push(t.clone());
            }
        }
        Ok(StructuredGraph { graph, sigma, arity, by_vertex })
    }

    /// A graph with no structure.
    pub fn plain(graph: Graph) -> Self {
        let n = graph.n();
        StructuredGraph { graph, sigma: BTreeMap::new(), arity: 0, by_vertex: vec![Vec::new(); n] }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn sigma(&self) -> &BTreeMap<Vec<usize>, u64> {
        &self.sigma
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn sigma_get(&self, tuple: &[usize]) -> Option<u64> {
        self.sigma.get(tuple).copied()
    }
}

/// Labeling-independent part of a rooted ball.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallShape {
    graph: Graph,
    sigma: BTreeMap<Vec<usize>, u64>,
    depth: Vec<usize>,
    radius: usize,
    to_original: Vec<usize>,
}

/// `(G[B(v, R)], f|B(v, R), v)` re-indexed locally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedBall {
    shape: Arc<BallShape>,
    root: usize,
    labels: Vec<u64>,
}

impl RootedBall {
    /// Builds a ball from explicit parts; `depth` is recomputed from `root`.
    pub fn from_parts(graph: Graph, root: usize, labels: Vec<u64>, sigma: BTreeMap<Vec<usize>, u64>, radius: usize) -> Result<Self> {
        let n = graph.n();
        if root >= n {
            return Err(Error::VertexOutOfRange { vertex: root, n });
        }
        if labels.len() != n {
            return Err(Error::InvalidInput(format!("{} labels for a ball of {n} vertices", labels.len())));
        }
        if let Some(t) = sigma.keys().find(|t| t.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidInput(format!("structure tuple {t:?} leaves the ball")));
        }
        let dist = graph.distances_within(root, radius);
        if let Some(v) = dist.iter().position(Option::is_none) {
            return Err(Error::InvalidInput(format!("vertex {v} is farther than {radius} from the root")));
        }
        let depth = dist.into_iter().map(Option::unwrap).collect();
        let shape = BallShape { graph, sigma, depth, radius, to_original: (0..n).collect() };
        Ok(RootedBall { shape: Arc::new(shape), root, labels })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn radius(&self) -> usize {
        self.shape.radius
    }

    pub fn graph(&self) -> &Graph {
        &self.shape.graph
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.shape.graph.neighbors(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.shape.graph.degree(v)
    }

    pub fn depth(&self, v: usize) -> usize {
        self.shape.depth[v]
    }

    pub fn label(&self, v: usize) -> u64 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn sigma(&self) -> &BTreeMap<Vec<usize>, u64> {
        &self.shape.sigma
    }

    pub fn sigma_get(&self, tuple: &[usize]) -> Option<u64> {
        self.shape.sigma.get(tuple).copied()
    }

    /// Original vertex ids, for tooling only. Algorithms and verifiers must not
    /// depend on them.
    pub fn to_original(&self) -> &[usize] {
        &self.shape.to_original
    }

    /// Copy with vertex `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<RootedBall> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidInput("relabeling is not a permutation of the ball".into()));
        }
        let edges: Vec<(usize, usize)> = self.graph().edge_pairs().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        let graph = Graph::from_edges(n, &edges)?;
        let sigma = self.sigma().iter().map(|(t, &x)| (t.iter().map(|&v| perm[v]).collect(), x)).collect();
        let mut labels = vec![0; n];
        let mut depth = vec![0; n];
        let mut to_original = vec![0; n];
        for i in 0..n {
            labels[perm[i]] = self.labels[i];
            depth[perm[i]] = self.shape.depth[i];
            to_original[perm[i]] = self.shape.to_original[i];
        }
        let shape = BallShape { graph, sigma, depth, radius: self.radius(), to_original };
        Ok(RootedBall { shape: Arc::new(shape), root: perm[self.root], labels })
    }

    pub fn with_labels(&self, labels: Vec<u64>) -> RootedBall {
        assert_eq!(labels.len(), self.n());
        RootedBall { shape: Arc::clone(&self.shape), root: self.root, labels }
    }
}

/// Ball structure around a fixed center, reusable across labelings.
#[derive(Debug, Clone)]
pub struct BallTemplate {
    shape: Arc<BallShape>,
}

impl BallTemplate {
    /// Vertices are ordered by (distance from `v`, original id); the root is 0.
    pub fn new(sg: &StructuredGraph, v: usize, radius: usize) -> Result<Self> {
        let g = sg.graph();
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
        }
        let mut dist: HashMap<usize, usize> = HashMap::from([(v, 0)]);
        let mut queue = VecDeque::from([v]);
        let mut order = vec![(0usize, v)];
        while let Some(x) = queue.pop_front() {
            let dx = dist[&x];
            if dx == radius {
                continue;
            }
            for &y in g.neighbors(x) {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(dx + 1);
                    order.push((dx + 1, y));
                    queue.push_back(y);
                }
            }
        }
        order.sort_unstable();
        let local: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &(_, x))| (x, i)).collect();
        let mut edges = Vec::new();
        for &(_, x) in &order {
            for &y in g.neighbors(x) {
                if x < y {
                    if let Some(&ly) = local.get(&y) {
                        edges.push((local[&x], ly));
                    }
                }
            }
        }
        let graph = Graph::from_edges(order.len(), &edges)?;
        let mut sigma = BTreeMap::new();
        for &(_, x) in &order {
            for t in &sg.by_vertex[x] {
                if let Some(mapped) = t.iter().map(|u| local.get(u).copied()).collect::<Option<Vec<usize>>>() {
                    sigma.insert(mapped, sg.sigma[t]);
                }
            }
        }
        let shape = BallShape {
            graph,
            sigma,
            depth: order.iter().map(|&(d, _)| d).collect(),
            radius,
            to_original: order.iter().map(|&(_, x)| x).collect(),
        };
        Ok(BallTemplate { shape: Arc::new(shape) })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.shape.to_original
    }

    pub fn len(&self) -> usize {
        self.shape.to_original.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shape.to_original.is_empty()
    }

    pub fn instantiate(&self, labels: Vec<u64>) -> RootedBall {
        assert_eq!(labels.len(), self.len());
        RootedBall { shape: Arc::clone(&self.shape), root: 0, labels }
    }

    /// Labels pulled from a global labeling.
    pub fn instantiate_from(&self, global: &[u64]) -> RootedBall {
        self.instantiate(self.shape.to_original.iter().map(|&x| global[x]).collect())
    }
}

/// `[G, f, v]_R` with deterministic local ids.
pub fn extract_ball(sg: &StructuredGraph, labels: &[u64], v: usize, radius: usize) -> Result<RootedBall> {
    if labels.len() != sg.n() {
        return Err(Error::InvalidInput(format!("{} labels for {} vertices", labels.len(), sg.n())));
    }
    Ok(BallTemplate::new(sg, v, radius)?.instantiate_from(labels))
}

//! Finite simple undirected graphs over dense vertex ids `0..n`.
//!
//! Graphs are immutable once built. All operators return fresh graphs and keep
//! a canonical ordering (sorted neighbor lists, components by minimum id), so
//! everything downstream is reproducible.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed;

/// A strictly increasing list of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Builds a set from arbitrary ids, sorting and removing duplicates.
    pub fn from_unsorted(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn check_bounds(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => Err(Error::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter().any(|v| large.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

/// An edge `{u, v}` with `u < v` and its index in [`Graph::edges`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId {
    pub index: usize,
    pub u: usize,
    pub v: usize,
}

impl EdgeId {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged; loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Edges with stable dense indices (the order of [`Graph::edge_pairs`]).
    pub fn edges(&self) -> Vec<EdgeId> {
        self.edge_pairs()
            .into_iter()
            .enumerate()
            .map(|(index, (u, v))| EdgeId { index, u, v })
            .collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet((0..self.n()).collect())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// BFS distances from `v`, cut off at `radius`. Unreached vertices are `None`.
    pub fn distances_within(&self, v: usize, radius: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            if dx == radius {
                continue;
            }
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// The closed ball `B(v, radius)`.
    pub fn ball(&self, v: usize, radius: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.ball_unchecked(v, radius))
    }

    pub(crate) fn ball_unchecked(&self, v: usize, radius: usize) -> VertexSet {
        let mut seen = vec![v];
        let mut frontier = vec![v];
        let mut mark = std::collections::HashSet::from([v]);
        for _ in 0..radius {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in &self.adj[x] {
                    if mark.insert(y) {
                        next.push(y);
                        seen.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        VertexSet::from_unsorted(seen)
    }

    /// The closed neighborhood `B(U, radius)` of a vertex set.
    pub fn set_ball(&self, set: &VertexSet, radius: usize) -> VertexSet {
        let mut out: Vec<usize> = Vec::new();
        for v in set.iter() {
            out.extend(self.ball_unchecked(v, radius).iter());
        }
        VertexSet::from_unsorted(out)
    }

    /// `G^R`: same vertices, `u ~ v` iff `0 < dist(u, v) <= R`.
    pub fn power(&self, radius: usize) -> Result<Graph> {
        if radius == 0 {
            return Err(Error::InvalidInput("power graph needs radius >= 1".into()));
        }
        let adj = (0..self.n())
            .map(|v| self.ball_unchecked(v, radius).iter().filter(|&u| u != v).collect())
            .collect();
        Ok(Graph { adj })
    }

    /// `G[U]` re-indexed densely in increasing id order.
    pub fn induced_subgraph(&self, set: &VertexSet) -> Result<InducedSubgraph> {
        set.check_bounds(self.n())?;
        let mut local = vec![usize::MAX; self.n()];
        for (i, v) in set.iter().enumerate() {
            local[v] = i;
        }
        let adj = set
            .iter()
            .map(|v| {
                self.adj[v]
                    .iter()
                    .filter(|&&u| local[u] != usize::MAX)
                    .map(|&u| local[u])
                    .collect()
            })
            .collect();
        Ok(InducedSubgraph {
            graph: Graph { adj },
            to_original: set.as_slice().to_vec(),
        })
    }

    /// The line graph together with the edge table naming its vertices.
    pub fn line_graph(&self) -> (Graph, Vec<EdgeId>) {
        let edges = self.edges();
        let mut index_of = std::collections::HashMap::with_capacity(edges.len());
        for e in &edges {
            index_of.insert((e.u, e.v), e.index);
        }
        let mut pairs = Vec::new();
        for v in 0..self.n() {
            let incident: Vec<usize> = self.adj[v]
                .iter()
                .map(|&u| index_of[&(v.min(u), v.max(u))])
                .collect();
            for i in 0..incident.len() {
                for j in i + 1..incident.len() {
                    pairs.push((incident[i], incident[j]));
                }
            }
        }
        let line = Graph::from_edges(edges.len(), &pairs).expect("line graph edges are in range");
        (line, edges)
    }

    /// Connected components ordered by minimum vertex id.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out = Vec::new();
        for start in 0..self.n() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[start] = id;
            let mut members = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = id;
                        members.push(y);
                        queue.push_back(y);
                    }
                }
            }
            out.push(VertexSet::from_unsorted(members));
        }
        out
    }

    /// Components of `G[U]`, returned in original ids.
    pub fn induced_components(&self, set: &VertexSet) -> Result<Vec<VertexSet>> {
        let sub = self.induced_subgraph(set)?;
        Ok(sub
            .graph
            .components()
            .into_iter()
            .map(|c| c.iter().map(|i| sub.to_original[i]).collect())
            .collect())
    }

    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| self.adj[v].iter().all(|&u| !set.contains(u)))
    }

    /// True when every edge of `self` is an edge of `other` (same vertex count).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n() == other.n() && self.edge_pairs().into_iter().all(|(u, v)| other.has_edge(u, v))
    }

    /// Graph minus the given edges.
    pub fn without_edges(&self, remove: impl Fn(usize, usize) -> bool) -> Graph {
        let adj = (0..self.n())
            .map(|v| self.adj[v].iter().copied().filter(|&u| !remove(v, u)).collect())
            .collect();
        Graph { adj }
    }
}

/// `G[U]` with the map from new ids back to original ids.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    pub to_original: Vec<usize>,
}

impl InducedSubgraph {
    pub fn local_id(&self, original: usize) -> Option<usize> {
        self.to_original.binary_search(&original).ok()
    }
}

// ---- generators ----

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("cycle needs at least 3 vertices, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges).unwrap()
}

/// `width x height` grid; vertex `(x, y)` has id `y * width + x`.
pub fn grid(width: usize, height: usize) -> Graph {
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let v = y * width + x;
            if x + 1 < width {
                edges.push((v, v + 1));
            }
            if y + 1 < height {
                edges.push((v, v + width));
            }
        }
    }
    Graph::from_edges(width * height, &edges).unwrap()
}

pub fn disjoint_union(parts: &[Graph]) -> Graph {
    let mut adj = Vec::new();
    for g in parts {
        let offset = adj.len();
        adj.extend(g.adj.iter().map(|list| list.iter().map(|&u| u + offset).collect()));
    }
    Graph { adj }
}

const MAX_PAIRING_ATTEMPTS: usize = 100_000;

/// Uniform random simple `d`-regular graph by the pairing model with restarts.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if (n * d) % 2 == 1 {
        return Err(Error::InvalidInput(format!("n*d must be even (n={n}, d={d})")));
    }
    if d >= n && n > 0 && d > 0 {
        return Err(Error::InvalidInput(format!("degree {d} infeasible on {n} vertices")));
    }
    let mut rng = seed::rng(seed, "random_regular", 0);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        points.shuffle(&mut rng);
        let mut edges = Vec::with_capacity(points.len() / 2);
        let mut seen = std::collections::HashSet::new();
        for pair in points.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        return Graph::from_edges(n, &edges);
    }
    Err(Error::InvalidInput(format!(
        "no simple {d}-regular pairing on {n} vertices after {MAX_PAIRING_ATTEMPTS} attempts"
    )))
}

/// Uniform random labelled tree on `n` vertices (random Prüfer-free attachment).
pub fn random_tree(n: usize, seed: u64) -> Graph {
    use rand::Rng;
    let mut rng = seed::rng(seed, "random_tree", 0);
    let edges: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Erdős–Rényi `G(n, p)`.
pub fn random_gnp(n: usize, p: f64, seed: u64) -> Graph {
    use rand::Rng;
    let mut rng = seed::rng(seed, "random_gnp", 0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

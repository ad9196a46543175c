//! Edge colorings indexed by [`Graph::edges`]: verification, exact chromatic
//! index for small graphs, and the Misra–Gries `Δ+1` construction.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::csp::Color;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeColoringCheck {
    pub proper: bool,
    /// Pairs of incident edge indices with equal colors.
    pub conflicts: Vec<(usize, usize)>,
    /// Number of distinct colors used.
    pub palette: usize,
    pub max_degree: usize,
    pub vizing_bound: usize,
}

pub fn verify_edge_coloring(graph: &Graph, colors: &[Color]) -> Result<EdgeColoringCheck> {
    let edges = graph.edges();
    if colors.len() != edges.len() {
        return Err(Error::InvalidInput(format!("{} colors for {} edges", colors.len(), edges.len())));
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); graph.n()];
    for e in &edges {
        incident[e.u].push(e.index);
        incident[e.v].push(e.index);
    }
    let mut conflicts = BTreeSet::new();
    for list in &incident {
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                if colors[a] == colors[b] {
                    conflicts.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    let palette = colors.iter().collect::<BTreeSet<_>>().len();
    let max_degree = graph.max_degree();
    Ok(EdgeColoringCheck {
        proper: conflicts.is_empty(),
        conflicts: conflicts.into_iter().collect(),
        palette,
        max_degree,
        vizing_bound: max_degree + 1,
    })
}

/// Proper edge coloring with at most `Δ + 1` colors.
pub fn misra_gries(graph: &Graph) -> Vec<Color> {
    let edges = graph.edges();
    let n = graph.n();
    let k = graph.max_degree() + 1;
    // at[x][c] = neighbor joined to x by the edge of color c.
    let mut at: Vec<Vec<Option<usize>>> = vec![vec![None; k]; n];
    let free = |at: &Vec<Vec<Option<usize>>>, x: usize| (0..k).find(|&c| at[x][c].is_none()).unwrap();
    let color_of = |at: &Vec<Vec<Option<usize>>>, x: usize, y: usize| (0..k).find(|&c| at[x][c] == Some(y));
    for e in &edges {
        let (u, v) = (e.u, e.v);
        let mut fan = vec![v];
        loop {
            let last = *fan.last().unwrap();
            let next = (0..k)
                .filter(|&c| at[last][c].is_none())
                .filter_map(|c| at[u][c])
                .find(|w| !fan.contains(w));
            match next {
                Some(w) => fan.push(w),
                None => break,
            }
        }
        let c = free(&at, u);
        let d = free(&at, *fan.last().unwrap());
        if c != d {
            let mut path = Vec::new();
            let (mut x, mut want) = (u, d);
            while let Some(y) = at[x][want] {
                path.push((x, y, want));
                x = y;
                want = if want == d { c } else { d };
            }
            for &(a, b, col) in &path {
                at[a][col] = None;
                at[b][col] = None;
            }
            for &(a, b, col) in &path {
                let swapped = if col == d { c } else { d };
                at[a][swapped] = Some(b);
                at[b][swapped] = Some(a);
            }
        }
        let is_fan = |at: &Vec<Vec<Option<usize>>>, upto: usize| {
            (1..=upto).all(|j| color_of(at, u, fan[j]).is_some_and(|col| at[fan[j - 1]][col].is_none()))
        };
        let i = (0..fan.len())
            .find(|&i| at[fan[i]][d].is_none() && is_fan(&at, i))
            .expect("Misra-Gries fan rotation always exists");
        let shifted: Vec<usize> = (1..=i).map(|j| color_of(&at, u, fan[j]).unwrap()).collect();
        for j in 1..=i {
            let col = shifted[j - 1];
            at[u][col] = None;
            at[fan[j]][col] = None;
        }
        for j in 0..i {
            let col = shifted[j];
            at[u][col] = Some(fan[j]);
            at[fan[j]][col] = Some(u);
        }
        at[u][d] = Some(fan[i]);
        at[fan[i]][d] = Some(u);
    }
    edges.iter().map(|e| color_of(&at, e.u, e.v).unwrap() as Color).collect()
}

/// Search-node cap for [`chromatic_index`].
pub const CHROMATIC_NODE_CAP: u64 = 50_000_000;

/// Exact chromatic index by exhaustive search; refuses more than `max_edges`
/// edges.
pub fn chromatic_index(graph: &Graph, max_edges: usize) -> Result<usize> {
    let edges = graph.edges();
    let m = edges.len();
    if m == 0 {
        return Ok(0);
    }
    if m > max_edges {
        return Err(Error::BudgetExceeded { what: "edges".into(), size: m as u128, budget: max_edges as u128 });
    }
    let delta = graph.max_degree();
    if delta * (graph.n() / 2) < m || delta >= 63 {
        return Ok(delta + 1);
    }
    let mut used = vec![0u64; graph.n()];
    let mut nodes = 0u64;
    fn go(i: usize, top: usize, k: usize, edges: &[crate::graph::EdgeId], used: &mut [u64], nodes: &mut u64) -> Option<bool> {
        *nodes += 1;
        if *nodes > CHROMATIC_NODE_CAP {
            return None;
        }
        if i == edges.len() {
            return Some(true);
        }
        let e = edges[i];
        let busy = used[e.u] | used[e.v];
        for c in 0..k.min(top + 1) {
            if busy >> c & 1 == 0 {
                used[e.u] |= 1 << c;
                used[e.v] |= 1 << c;
                let r = go(i + 1, top.max(c + 1), k, edges, used, nodes);
                used[e.u] &= !(1 << c);
                used[e.v] &= !(1 << c);
                match r {
                    Some(false) => {}
                    other => return other,
                }
            }
        }
        Some(false)
    }
    match go(0, 0, delta, &edges, &mut used, &mut nodes) {
        Some(true) => Ok(delta),
        Some(false) => Ok(delta + 1),
        None => Err(Error::BudgetExceeded { what: "search nodes".into(), size: nodes as u128, budget: CHROMATIC_NODE_CAP as u128 }),
    }
}

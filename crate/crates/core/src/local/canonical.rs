//! Canonical encodings of rooted labeled balls by individualization and
//! refinement, with transposition pruning for interchangeable vertices.

use rand::seq::SliceRandom;
use serde::Serialize;

use super::structured::RootedBall;
use crate::error::{Error, Result};
use crate::seed;

pub const DEFAULT_CANONICAL_CAP: usize = 12;

/// Hard ceiling imposed by the bitmask adjacency rows of the encoding.
const MAX_CANONICAL_VERTICES: usize = 64;

type Cells = Vec<usize>;

fn initial_cells(ball: &RootedBall) -> Cells {
    let keys: Vec<(usize, u64, Option<u64>, usize)> = (0..ball.n())
        .map(|v| (ball.depth(v), ball.label(v), ball.sigma_get(&[v]), ball.degree(v)))
        .collect();
    ranks(&keys)
}

fn ranks<K: Ord + Clone>(keys: &[K]) -> Cells {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap()).collect()
}

fn cell_count(cells: &Cells) -> usize {
    cells.iter().max().map_or(0, |&m| m + 1)
}

/// Colour refinement until stable; cell order stays isomorphism-invariant.
fn refine(ball: &RootedBall, incident: &[Vec<(&Vec<usize>, u64)>], mut cells: Cells) -> Cells {
    let mut count = cell_count(&cells);
    loop {
        let keys: Vec<(usize, Vec<usize>, Vec<Vec<u64>>)> = (0..ball.n())
            .map(|v| {
                let mut nb: Vec<usize> = ball.neighbors(v).iter().map(|&u| cells[u]).collect();
                nb.sort_unstable();
                let mut sig: Vec<Vec<u64>> = incident[v]
                    .iter()
                    .map(|(t, val)| {
                        let mut k = vec![*val, t.len() as u64];
                        k.extend(t.iter().map(|&u| if u == v { u64::MAX } else { cells[u] as u64 }));
                        k
                    })
                    .collect();
                sig.sort_unstable();
                (cells[v], nb, sig)
            })
            .collect();
        let next = ranks(&keys);
        let next_count = cell_count(&next);
        if next_count == count {
            return next;
        }
        count = next_count;
        cells = next;
    }
}

fn individualize(cells: &Cells, v: usize) -> Cells {
    let c = cells[v];
    cells.iter().enumerate().map(|(u, &x)| if u == v || x < c { x } else { x + 1 }).collect()
}

fn leaf_encoding(ball: &RootedBall, cells: &Cells) -> Vec<u64> {
    let n = ball.n();
    let mut at = vec![0; n];
    for (v, &c) in cells.iter().enumerate() {
        at[c] = v;
    }
    let mut enc = vec![n as u64, ball.radius() as u64, cells[ball.root()] as u64];
    enc.extend(at.iter().map(|&v| ball.label(v)));
    for &v in &at {
        enc.push(ball.neighbors(v).iter().fold(0u64, |m, &u| m | (1u64 << cells[u])));
    }
    let mut tuples: Vec<(Vec<usize>, u64)> =
        ball.sigma().iter().map(|(t, &x)| (t.iter().map(|&u| cells[u]).collect(), x)).collect();
    tuples.sort_unstable();
    enc.push(tuples.len() as u64);
    for (t, x) in tuples {
        enc.push(t.len() as u64);
        enc.extend(t.iter().map(|&p| p as u64));
        enc.push(x);
    }
    enc
}

/// Whether swapping `a` and `b` preserves the labeled structure.
fn is_transposition_automorphism(ball: &RootedBall, a: usize, b: usize) -> bool {
    if ball.label(a) != ball.label(b) {
        return false;
    }
    let g = ball.graph();
    for x in 0..ball.n() {
        if x != a && x != b && g.has_edge(a, x) != g.has_edge(b, x) {
            return false;
        }
    }
    let swap = |u: usize| if u == a { b } else if u == b { a } else { u };
    ball.sigma().iter().all(|(t, &x)| {
        let image: Vec<usize> = t.iter().map(|&u| swap(u)).collect();
        ball.sigma_get(&image) == Some(x)
    })
}

fn search(ball: &RootedBall, incident: &[Vec<(&Vec<usize>, u64)>], cells: Cells, best: &mut Option<(Vec<u64>, Cells)>) {
    let cells = refine(ball, incident, cells);
    let n = ball.n();
    let target = (0..cell_count(&cells)).find(|&c| cells.iter().filter(|&&x| x == c).count() > 1);
    let Some(target) = target else {
        let enc = leaf_encoding(ball, &cells);
        if best.as_ref().is_none_or(|(b, _)| enc < *b) {
            *best = Some((enc, cells));
        }
        return;
    };
    let members: Vec<usize> = (0..n).filter(|&v| cells[v] == target).collect();
    let mut explored: Vec<usize> = Vec::new();
    for &v in &members {
        if explored.iter().any(|&u| is_transposition_automorphism(ball, u, v)) {
            continue;
        }
        explored.push(v);
        search(ball, incident, individualize(&cells, v), best);
    }
}

/// Canonical encoding and the canonical position of each vertex.
pub fn canonical_labeling(ball: &RootedBall, cap: usize) -> Result<(Vec<u64>, Vec<usize>)> {
    let cap = cap.min(MAX_CANONICAL_VERTICES);
    if ball.n() > cap {
        return Err(Error::BudgetExceeded { what: "canonical form of a ball".into(), size: ball.n() as u128, budget: cap as u128 });
    }
    let mut incident: Vec<Vec<(&Vec<usize>, u64)>> = vec![Vec::new(); ball.n()];
    for (t, &x) in ball.sigma() {
        let mut distinct = t.clone();
        distinct.sort_unstable();
        distinct.dedup();
        for v in distinct {
            incident[v].push((t, x));
        }
    }
    let mut best = None;
    search(ball, &incident, initial_cells(ball), &mut best);
    Ok(best.expect("search visits at least one leaf"))
}

/// Byte string equal for two balls exactly when they are isomorphic.
pub fn canonical_form(ball: &RootedBall, cap: usize) -> Result<Vec<u8>> {
    let (enc, _) = canonical_labeling(ball, cap)?;
    Ok(enc.iter().flat_map(|x| x.to_le_bytes()).collect())
}

/// The ball relabeled into canonical order.
pub fn canonical_ball(ball: &RootedBall, cap: usize) -> Result<RootedBall> {
    let (_, perm) = canonical_labeling(ball, cap)?;
    ball.relabel(&perm)
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub checked: usize,
    /// `(ball index, sample index)` pairs where the value changed.
    pub mismatches: Vec<(usize, usize)>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Evaluates `f` on random relabelings of each ball and compares with the
/// value on the ball itself.
pub fn invariance_test<T: PartialEq>(balls: &[RootedBall], samples: usize, seed: u64, f: impl Fn(&RootedBall) -> T) -> Result<InvarianceReport> {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for (i, ball) in balls.iter().enumerate() {
        let reference = f(ball);
        let mut rng = seed::rng(seed, "invariance", i as u64);
        for j in 0..samples {
            let mut perm: Vec<usize> = (0..ball.n()).collect();
            perm.shuffle(&mut rng);
            checked += 1;
            if f(&ball.relabel(&perm)?) != reference {
                mismatches.push((i, j));
            }
        }
    }
    Ok(InvarianceReport { checked, mismatches })
}

//! Extensional constraints, CSPs, and the restriction/conditioning algebra.
//!
//! A constraint lists the *forbidden* colorings of its domain. Probabilities
//! are exact rationals: `P[B] = |B| / q^|dom(B)|`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{big_pow, Rational};
use crate::graph::{Graph, VertexSet};

pub type Color = u32;

/// Default cap on the number of variables per component for exhaustive search.
pub const DEFAULT_BRUTE_FORCE_BUDGET: usize = 20;

/// Partial map from variables to colors `0..q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialColoring {
    q: u32,
    map: BTreeMap<usize, Color>,
}

impl PartialColoring {
    pub fn new(q: u32) -> Self {
        PartialColoring { q, map: BTreeMap::new() }
    }

    pub fn from_pairs(q: u32, pairs: impl IntoIterator<Item = (usize, Color)>) -> Result<Self> {
        let mut f = PartialColoring::new(q);
        for (v, c) in pairs {
            f.set(v, c)?;
        }
        Ok(f)
    }

    /// Total coloring of `0..colors.len()`.
    pub fn from_total(q: u32, colors: &[Color]) -> Result<Self> {
        Self::from_pairs(q, colors.iter().copied().enumerate())
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn set(&mut self, v: usize, c: Color) -> Result<()> {
        if c >= self.q {
            return Err(Error::InvalidInput(format!("color {c} not below q = {}", self.q)));
        }
        self.map.insert(v, c);
        Ok(())
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.map.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn domain(&self) -> VertexSet {
        self.map.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Color)> + '_ {
        self.map.iter().map(|(&v, &c)| (v, c))
    }

    /// Restriction to a vertex set.
    pub fn restricted_to(&self, set: &VertexSet) -> PartialColoring {
        PartialColoring {
            q: self.q,
            map: self.map.iter().filter(|(v, _)| set.contains(**v)).map(|(&v, &c)| (v, c)).collect(),
        }
    }

    /// Disjoint union `self ⊔ other`; overlapping keys are an error.
    pub fn disjoint_union(&self, other: &PartialColoring) -> Result<PartialColoring> {
        let mut out = self.clone();
        for (v, c) in other.iter() {
            if out.map.insert(v, c).is_some() {
                return Err(Error::InvalidInput(format!("colorings overlap at vertex {v}")));
            }
        }
        Ok(out)
    }

    /// Dense vector over `0..n`; fails if some vertex is unassigned.
    pub fn to_total(&self, n: usize) -> Result<Vec<Color>> {
        (0..n).map(|v| self.get(v).ok_or(Error::NotTotal(v))).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    domain: Vec<usize>,
    forbidden: BTreeSet<Vec<Color>>,
    q: u32,
}

impl Constraint {
    pub fn new(domain: Vec<usize>, forbidden: impl IntoIterator<Item = Vec<Color>>, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidConstraint("q must be at least 1".into()));
        }
        let mut sorted = domain.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidConstraint(format!("repeated variable in domain {domain:?}")));
        }
        let forbidden: BTreeSet<Vec<Color>> = forbidden.into_iter().collect();
        for t in &forbidden {
            if t.len() != domain.len() {
                return Err(Error::InvalidConstraint(format!(
                    "tuple {t:?} has length {}, domain has {}",
                    t.len(),
                    domain.len()
                )));
            }
            if let Some(&c) = t.iter().find(|&&c| c >= q) {
                return Err(Error::InvalidConstraint(format!("color {c} not below q = {q}")));
            }
        }
        Ok(Constraint { domain, forbidden, q })
    }

    /// Materializes a constraint from a predicate that returns `true` on
    /// forbidden tuples. Refuses when `q^|domain|` exceeds `cap`.
    pub fn from_predicate(domain: Vec<usize>, q: u32, cap: u128, mut forbids: impl FnMut(&[Color]) -> bool) -> Result<Self> {
        let total = (q as u128).checked_pow(domain.len() as u32).unwrap_or(u128::MAX);
        if total > cap {
            return Err(Error::BudgetExceeded {
                what: format!("enumeration of {} variables with {} colors", domain.len(), q),
                size: total,
                budget: cap,
            });
        }
        let mut forbidden = Vec::new();
        for_each_assignment(domain.len(), q, |t| {
            if forbids(t) {
                forbidden.push(t.to_vec());
            }
        });
        Constraint::new(domain, forbidden, q)
    }

    /// The always-violated empty-domain constraint `{()}`.
    pub fn always_violated(q: u32) -> Self {
        Constraint { domain: Vec::new(), forbidden: BTreeSet::from([Vec::new()]), q }
    }

    /// The always-satisfied empty-domain constraint `∅`.
    pub fn always_satisfied(q: u32) -> Self {
        Constraint { domain: Vec::new(), forbidden: BTreeSet::new(), q }
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn domain_set(&self) -> VertexSet {
        VertexSet::from_unsorted(self.domain.clone())
    }

    pub fn forbidden(&self) -> &BTreeSet<Vec<Color>> {
        &self.forbidden
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn is_trivially_satisfied(&self) -> bool {
        self.forbidden.is_empty()
    }

    pub fn is_always_violated(&self) -> bool {
        self.domain.is_empty() && !self.forbidden.is_empty()
    }

    fn tuple_of(&self, f: &PartialColoring) -> Result<Vec<Color>> {
        self.domain.iter().map(|&v| f.get(v).ok_or(Error::NotTotal(v))).collect()
    }

    pub fn violates(&self, f: &PartialColoring) -> Result<bool> {
        Ok(self.forbidden.contains(&self.tuple_of(f)?))
    }

    pub fn probability(&self) -> Rational {
        Rational::new(BigInt::from(self.forbidden.len()), big_pow(self.q as u64, self.domain.len()))
    }

    /// `B/f`: residual constraint on the variables `f` leaves unassigned.
    pub fn restrict(&self, f: &PartialColoring) -> Constraint {
        let fixed: Vec<Option<Color>> = self.domain.iter().map(|&v| f.get(v)).collect();
        if fixed.iter().all(Option::is_none) {
            return self.clone();
        }
        let domain: Vec<usize> = self
            .domain
            .iter()
            .zip(&fixed)
            .filter(|(_, c)| c.is_none())
            .map(|(&v, _)| v)
            .collect();
        let forbidden = self
            .forbidden
            .iter()
            .filter(|t| t.iter().zip(&fixed).all(|(c, fc)| fc.is_none_or(|fc| fc == *c)))
            .map(|t| t.iter().zip(&fixed).filter(|(_, fc)| fc.is_none()).map(|(&c, _)| c).collect())
            .collect();
        Constraint { domain, forbidden, q: self.q }
    }

    /// `P[B | ψ]` for `ψ` total exactly on `dom(B) ∩ U`.
    pub fn conditional_probability(&self, psi: &PartialColoring, set: &VertexSet) -> Result<Rational> {
        for &v in &self.domain {
            let inside = set.contains(v);
            match (inside, psi.get(v)) {
                (true, None) => return Err(Error::NotTotal(v)),
                (false, Some(_)) => {
                    return Err(Error::InvalidInput(format!("conditioning assigns {v}, which lies outside U")))
                }
                _ => {}
            }
        }
        Ok(self.restrict(psi).probability())
    }

    /// Domain sorted ascending with tuples permuted to match.
    pub fn normalized(&self) -> Constraint {
        let mut order: Vec<usize> = (0..self.domain.len()).collect();
        order.sort_by_key(|&i| self.domain[i]);
        Constraint {
            domain: order.iter().map(|&i| self.domain[i]).collect(),
            forbidden: self.forbidden.iter().map(|t| order.iter().map(|&i| t[i]).collect()).collect(),
            q: self.q,
        }
    }

    /// Number of forbidden tuples per projection onto the positions in `keep`.
    pub(crate) fn projection_counts(&self, keep: &[usize]) -> HashMap<Vec<Color>, u64> {
        let mut counts = HashMap::new();
        for t in &self.forbidden {
            let key: Vec<Color> = keep.iter().map(|&i| t[i]).collect();
            *counts.entry(key).or_insert(0u64) += 1;
        }
        counts
    }
}

/// Calls `visit` on every tuple of `len` colors below `q`, lexicographically.
pub fn for_each_assignment(len: usize, q: u32, mut visit: impl FnMut(&[Color])) {
    let mut t = vec![0; len];
    loop {
        visit(&t);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < q {
                break;
            }
            t[i] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Csp {
    universe: usize,
    q: u32,
    constraints: Vec<Constraint>,
}

impl Csp {
    pub fn new(universe: usize, q: u32, constraints: Vec<Constraint>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidConstraint("q must be at least 1".into()));
        }
        for (i, b) in constraints.iter().enumerate() {
            if b.q != q {
                return Err(Error::InvalidConstraint(format!("constraint {i} has q = {}, CSP has {q}", b.q)));
            }
            if let Some(&v) = b.domain.iter().find(|&&v| v >= universe) {
                return Err(Error::VertexOutOfRange { vertex: v, n: universe });
            }
        }
        Ok(Csp { universe, q, constraints })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// `p(𝓑)`: the largest constraint probability (0 for an empty CSP).
    pub fn p_param(&self) -> Rational {
        self.constraints.iter().map(Constraint::probability).max().unwrap_or_default()
    }

    /// Constraint indices incident to each variable.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.universe];
        for (i, b) in self.constraints.iter().enumerate() {
            for &v in &b.domain {
                inc[v].push(i);
            }
        }
        inc
    }

    /// For each constraint, the number of *other* constraints (counted as a
    /// multiset) whose domain meets its domain.
    pub fn dependency_degrees(&self) -> Vec<usize> {
        let inc = self.incidence();
        let mut stamp = vec![usize::MAX; self.constraints.len()];
        self.constraints
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut count = 0;
                for &v in &b.domain {
                    for &j in &inc[v] {
                        if j != i && stamp[j] != i {
                            stamp[j] = i;
                            count += 1;
                        }
                    }
                }
                count
            })
            .collect()
    }

    /// `d(𝓑)`: the maximum dependency degree.
    pub fn d_param(&self) -> usize {
        self.dependency_degrees().into_iter().max().unwrap_or(0)
    }

    /// `G_𝓑`: variables joined when they share a constraint domain.
    pub fn dependency_graph(&self) -> Graph {
        let mut edges = Vec::new();
        for b in &self.constraints {
            for i in 0..b.domain.len() {
                for j in i + 1..b.domain.len() {
                    edges.push((b.domain[i], b.domain[j]));
                }
            }
        }
        Graph::from_edges(self.universe, &edges).expect("domains are within the universe")
    }

    /// `𝓑/f`.
    pub fn restrict(&self, f: &PartialColoring) -> Csp {
        Csp {
            universe: self.universe,
            q: self.q,
            constraints: self.constraints.iter().map(|b| b.restrict(f)).collect(),
        }
    }

    /// Indices of constraints violated by a coloring total on their domains.
    pub fn violated(&self, f: &PartialColoring) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, b) in self.constraints.iter().enumerate() {
            if b.violates(f)? {
                out.push(i);
            }
        }
        Ok(out)
    }

    pub fn is_solution(&self, f: &PartialColoring) -> Result<bool> {
        Ok(self.violated(f)?.is_empty())
    }

    /// Constraint multiset in canonical form: each constraint normalized, then
    /// the list sorted.
    pub fn normalized(&self) -> Csp {
        let mut constraints: Vec<Constraint> = self.constraints.iter().map(Constraint::normalized).collect();
        constraints.sort_by(|a, b| (&a.domain, &a.forbidden).cmp(&(&b.domain, &b.forbidden)));
        Csp { universe: self.universe, q: self.q, constraints }
    }

    pub fn max_domain_size(&self) -> usize {
        self.constraints.iter().map(|b| b.domain.len()).max().unwrap_or(0)
    }
}

/// Exhaustive solver: independent backtracking per component of `G_𝓑`.
///
/// Returns `Ok(None)` when some component has no solution. Components with
/// more than `budget` variables are refused.
pub fn brute_force_solve(csp: &Csp, budget: usize) -> Result<Option<PartialColoring>> {
    if csp.constraints.iter().any(Constraint::is_always_violated) {
        return Ok(None);
    }
    let dep = csp.dependency_graph();
    let comps = dep.components();
    if let Some(big) = comps.iter().find(|c| c.len() > budget) {
        return Err(Error::BudgetExceeded {
            what: format!("component of the dependency graph starting at vertex {}", big.min().unwrap()),
            size: big.len() as u128,
            budget: budget as u128,
        });
    }
    let mut owner = vec![usize::MAX; csp.universe];
    for (ci, c) in comps.iter().enumerate() {
        for v in c.iter() {
            owner[v] = ci;
        }
    }
    let mut per_comp: Vec<Vec<&Constraint>> = vec![Vec::new(); comps.len()];
    for b in &csp.constraints {
        if let Some(&v) = b.domain.first() {
            per_comp[owner[v]].push(b);
        }
    }
    let solved: Vec<Option<Vec<Color>>> = comps
        .par_iter()
        .zip(per_comp.par_iter())
        .map(|(comp, cons)| solve_component(comp.as_slice(), cons, csp.q))
        .collect();
    let mut f = PartialColoring::new(csp.q);
    for (comp, sol) in comps.iter().zip(solved) {
        let Some(colors) = sol else { return Ok(None) };
        for (v, c) in comp.iter().zip(colors) {
            f.map.insert(v, c);
        }
    }
    Ok(Some(f))
}

/// Lexicographic backtracking; a constraint is checked as soon as its last
/// variable (in component order) is assigned.
fn solve_component(vars: &[usize], cons: &[&Constraint], q: u32) -> Option<Vec<Color>> {
    if cons.iter().all(|b| b.forbidden.is_empty()) {
        return Some(vec![0; vars.len()]);
    }
    let pos = |v: usize| vars.binary_search(&v).unwrap();
    // (constraint, positions of its variables) grouped by completion position
    let mut completes_at: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new(); vars.len()];
    for (ci, b) in cons.iter().enumerate() {
        let positions: Vec<usize> = b.domain.iter().map(|&v| pos(v)).collect();
        let last = *positions.iter().max().unwrap();
        completes_at[last].push((ci, positions));
    }
    let mut assign = vec![0 as Color; vars.len()];
    let mut depth = 0usize;
    let mut tried = vec![false; vars.len()];
    let mut tuple = Vec::new();
    loop {
        if tried[depth] {
            assign[depth] += 1;
        } else {
            tried[depth] = true;
            assign[depth] = 0;
        }
        if assign[depth] >= q {
            tried[depth] = false;
            if depth == 0 {
                return None;
            }
            depth -= 1;
            continue;
        }
        let ok = completes_at[depth].iter().all(|(ci, positions)| {
            tuple.clear();
            tuple.extend(positions.iter().map(|&p| assign[p]));
            !cons[*ci].forbidden.contains(&tuple)
        });
        if ok {
            if depth + 1 == vars.len() {
                return Some(assign);
            }
            depth += 1;
        }
    }
}

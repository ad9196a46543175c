//! Schreier graphs of permutation actions and their `|F| + 1` edge colorings.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::coloring::{section_coloring, union_coloring, ColoredPart};
use super::edge_coloring::{misra_gries, verify_edge_coloring};
use super::section::{independent_complete_section, SectionSolver};
use crate::csp::Color;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub perm: Vec<usize>,
    pub inverse: String,
    /// Route through the odd/long branch regardless of parity.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub long: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchreierAction {
    pub points: usize,
    pub generators: Vec<Generator>,
}

fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x);
            x = perm[x];
        }
        out.push(cyc);
    }
    out
}

impl SchreierAction {
    /// Translations of `Z_{d_0} × ... × Z_{d_r}` (mixed radix, first
    /// coordinate most significant) by each shift and its negation.
    pub fn translations(dims: &[usize], shifts: &[Vec<i64>]) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidInput("dimensions must be positive".into()));
        }
        let points: usize = dims.iter().product();
        let norm = |s: &[i64]| -> Vec<i64> { s.iter().zip(dims).map(|(&x, &d)| x.rem_euclid(d as i64)).collect() };
        let name = |s: &[i64]| -> String {
            let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
            if parts.len() == 1 { format!("{:+}", s[0]) } else { format!("({})", parts.join(",")) }
        };
        let signed = |s: &[i64]| -> Vec<i64> {
            s.iter().zip(dims).map(|(&x, &d)| if 2 * x > d as i64 { x - d as i64 } else { x }).collect()
        };
        let perm_of = |s: &[i64]| -> Vec<usize> {
            (0..points)
                .map(|p| {
                    let mut rest = p;
                    let mut coords = vec![0usize; dims.len()];
                    for i in (0..dims.len()).rev() {
                        coords[i] = rest % dims[i];
                        rest /= dims[i];
                    }
                    coords.iter().zip(s).zip(dims).fold(0, |acc, ((&c, &x), &d)| acc * d + (c + x as usize) % d)
                })
                .collect()
        };
        let mut generators = Vec::new();
        let mut seen = BTreeSet::new();
        for s in shifts {
            if s.len() != dims.len() {
                return Err(Error::InvalidInput(format!("shift {s:?} has the wrong dimension")));
            }
            let a = norm(s);
            let b = norm(&s.iter().map(|x| -x).collect::<Vec<_>>());
            if !seen.insert(a.clone()) {
                continue;
            }
            let (na, nb) = (name(&signed(&a)), name(&signed(&b)));
            if a == b {
                generators.push(Generator { name: na.clone(), perm: perm_of(&a), inverse: na, long: false });
            } else {
                seen.insert(b.clone());
                generators.push(Generator { name: na.clone(), perm: perm_of(&a), inverse: nb.clone(), long: false });
                generators.push(Generator { name: nb, perm: perm_of(&b), inverse: na, long: false });
            }
        }
        let action = SchreierAction { points, generators };
        action.validate()?;
        Ok(action)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.points;
        if m == 0 || self.generators.is_empty() {
            return Err(Error::InvalidInput("action needs points and generators".into()));
        }
        let mut by_name = HashMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if by_name.insert(g.name.as_str(), i).is_some() {
                return Err(Error::InvalidInput(format!("duplicate generator name {}", g.name)));
            }
            let mut sorted = g.perm.clone();
            sorted.sort_unstable();
            if sorted != (0..m).collect::<Vec<_>>() {
                return Err(Error::InvalidInput(format!("{} is not a permutation of {m} points", g.name)));
            }
            if g.perm.iter().enumerate().all(|(x, &y)| x == y) {
                return Err(Error::InvalidInput(format!("{} is the identity", g.name)));
            }
            let lens: BTreeSet<usize> = cycles_of(&g.perm).iter().map(Vec::len).collect();
            if lens.len() != 1 {
                return Err(Error::InvalidInput(format!("{} has cycles of lengths {lens:?}", g.name)));
            }
        }
        for g in &self.generators {
            let &j = by_name
                .get(g.inverse.as_str())
                .ok_or_else(|| Error::InvalidInput(format!("inverse {} of {} is missing", g.inverse, g.name)))?;
            let h = &self.generators[j];
            if h.inverse != g.name {
                return Err(Error::InvalidInput(format!("inverse pairing of {} is not an involution", g.name)));
            }
            if (0..m).any(|x| h.perm[g.perm[x]] != x) {
                return Err(Error::InvalidInput(format!("{} is not the inverse of {}", h.name, g.name)));
            }
            if h.long != g.long {
                return Err(Error::InvalidInput(format!("{} and its inverse disagree on the long flag", g.name)));
            }
        }
        for (i, a) in self.generators.iter().enumerate() {
            if a.long && self.order(i) <= 2 {
                return Err(Error::InvalidInput(format!("{} has order 2 and cannot be long", a.name)));
            }
            for b in &self.generators[i + 1..] {
                if let Some(x) = (0..m).find(|&x| a.perm[x] == b.perm[x]) {
                    return Err(Error::InvalidInput(format!("{} and {} agree at point {x}", a.name, b.name)));
                }
            }
        }
        Ok(())
    }

    /// Common cycle length of generator `i`.
    pub fn order(&self, i: usize) -> usize {
        cycles_of(&self.generators[i].perm)[0].len()
    }

    /// One generator per inverse pair, in list order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut taken = BTreeSet::new();
        let mut reps = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            if taken.insert(g.name.clone()) {
                taken.insert(g.inverse.clone());
                reps.push(i);
            }
        }
        reps
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorClassification {
    pub size: usize,
    pub order_two: Vec<String>,
    pub even: Vec<String>,
    pub odd: Vec<String>,
    pub long: Vec<String>,
}

impl GeneratorClassification {
    /// `|F₂| + 2 (|F_even| + |F_odd| + |F_long|)`.
    pub fn counted_size(&self) -> usize {
        self.order_two.len() + 2 * (self.even.len() + self.odd.len() + self.long.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    OrderTwo,
    Even,
    Odd,
    Long,
}

fn kind(a: &SchreierAction, i: usize) -> Kind {
    let ord = a.order(i);
    if ord == 2 {
        Kind::OrderTwo
    } else if a.generators[i].long {
        Kind::Long
    } else if ord.is_multiple_of(2) {
        Kind::Even
    } else {
        Kind::Odd
    }
}

pub fn classify(a: &SchreierAction) -> Result<GeneratorClassification> {
    a.validate()?;
    let mut c = GeneratorClassification { size: a.generators.len(), order_two: vec![], even: vec![], odd: vec![], long: vec![] };
    for i in a.representatives() {
        let name = a.generators[i].name.clone();
        match kind(a, i) {
            Kind::OrderTwo => c.order_two.push(name),
            Kind::Even => c.even.push(name),
            Kind::Odd => c.odd.push(name),
            Kind::Long => c.long.push(name),
        }
    }
    Ok(c)
}

#[derive(Debug, Clone)]
pub struct SchreierGraph {
    pub graph: Graph,
    /// Generator index (a representative) contributing each edge.
    pub labels: Vec<usize>,
}

impl SchreierGraph {
    /// Edge indices of `E_σ` for representative `rep`.
    pub fn edge_class(&self, rep: usize) -> VertexSet {
        VertexSet::from_unsorted(self.labels.iter().enumerate().filter(|&(_, &l)| l == rep).map(|(e, _)| e).collect())
    }
}

pub fn schreier_graph(a: &SchreierAction) -> Result<SchreierGraph> {
    a.validate()?;
    let mut owner: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for i in a.representatives() {
        for (x, &y) in a.generators[i].perm.iter().enumerate() {
            if let Some(&j) = owner.get(&(x.min(y), x.max(y))) {
                if j != i {
                    return Err(Error::InvalidInput(format!("edge ({x}, {y}) arises from two generator pairs")));
                }
            }
            owner.insert((x.min(y), x.max(y)), i);
        }
    }
    let pairs: Vec<(usize, usize)> = owner.keys().copied().collect();
    let graph = Graph::from_edges(a.points, &pairs)?;
    Ok(SchreierGraph { graph, labels: owner.into_values().collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SectionRoute {
    /// Least edge per odd cycle, then a backtracking search if those collide.
    #[default]
    Direct,
    /// Through [`independent_complete_section`] on the line graph.
    Lll { seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct SchreierColoring {
    pub classification: GeneratorClassification,
    /// Color per edge index.
    pub colors: Vec<Color>,
    pub palette: usize,
    pub bound: usize,
    /// `section`, `section-search`, `section-lll`, `no-odd` or `vizing-fallback`.
    pub method: String,
    pub section_size: usize,
    pub proper: bool,
}

/// Largest subset size used by the LLL route; keeps each `B_F` enumerable.
pub const LLL_SUBSET_CAP: usize = 12;

/// Node cap for the backtracking search over odd-cycle sections.
pub const SECTION_SEARCH_CAP: u64 = 1_000_000;

/// The edge cycles of `E_σ` in point order, as edge indices.
fn edge_cycles(a: &SchreierAction, sg: &SchreierGraph, rep: usize) -> Vec<Vec<usize>> {
    let index: HashMap<(usize, usize), usize> = sg.graph.edges().iter().map(|e| ((e.u, e.v), e.index)).collect();
    let perm = &a.generators[rep].perm;
    cycles_of(perm)
        .into_iter()
        .map(|cyc| cyc.iter().map(|&x| index[&(x.min(perm[x]), x.max(perm[x]))]).collect())
        .collect()
}

fn search_section(cycles: &[Vec<usize>], ends: &[(usize, usize)], n: usize) -> Option<Vec<usize>> {
    let mut used = vec![false; n];
    let mut pick = Vec::with_capacity(cycles.len());
    let mut nodes = 0u64;
    fn go(i: usize, cycles: &[Vec<usize>], ends: &[(usize, usize)], used: &mut [bool], pick: &mut Vec<usize>, nodes: &mut u64) -> Option<bool> {
        *nodes += 1;
        if *nodes > SECTION_SEARCH_CAP {
            return None;
        }
        if i == cycles.len() {
            return Some(true);
        }
        let mut options = cycles[i].clone();
        options.sort_unstable();
        for e in options {
            let (u, v) = ends[e];
            if used[u] || used[v] {
                continue;
            }
            used[u] = true;
            used[v] = true;
            pick.push(e);
            match go(i + 1, cycles, ends, used, pick, nodes) {
                Some(false) => {}
                other => return other,
            }
            pick.pop();
            used[u] = false;
            used[v] = false;
        }
        Some(false)
    }
    match go(0, cycles, ends, &mut used, &mut pick, &mut nodes) {
        Some(true) => Some(pick),
        _ => None,
    }
}

pub fn schreier_edge_coloring(a: &SchreierAction, route: SectionRoute) -> Result<SchreierColoring> {
    let classification = classify(a)?;
    if a.generators.len() < 2 {
        return Err(Error::Precondition("generating set needs at least two elements".into()));
    }
    let sg = schreier_graph(a)?;
    let edges = sg.graph.edges();
    let ends: Vec<(usize, usize)> = edges.iter().map(|e| (e.u, e.v)).collect();
    let (line, _) = sg.graph.line_graph();
    let bound = a.generators.len() + 1;
    let reps = a.representatives();

    let mut parts = Vec::new();
    let mut odd_reps = Vec::new();
    for &r in &reps {
        match kind(a, r) {
            Kind::OrderTwo => {
                let class = sg.edge_class(r);
                parts.push(ColoredPart { colors: vec![0; class.len()], vertices: class, palette: 1 });
            }
            Kind::Even => {
                let mut color: BTreeMap<usize, Color> = BTreeMap::new();
                for cyc in edge_cycles(a, &sg, r) {
                    for (j, &e) in cyc.iter().enumerate() {
                        color.insert(e, (j % 2) as Color);
                    }
                }
                let vertices = VertexSet::from_unsorted(color.keys().copied().collect());
                parts.push(ColoredPart { vertices, colors: color.into_values().collect(), palette: 2 });
            }
            Kind::Odd | Kind::Long => odd_reps.push(r),
        }
    }

    let mut method = "no-odd".to_string();
    let mut section_size = 0;
    if !odd_reps.is_empty() {
        let odd_set = VertexSet::from_unsorted(odd_reps.iter().flat_map(|&r| sg.edge_class(r).into_vec()).collect());
        let sub = line.induced_subgraph(&odd_set)?;
        let local = |e: usize| sub.local_id(e).unwrap();
        let cycles: Vec<Vec<usize>> = odd_reps.iter().flat_map(|&r| edge_cycles(a, &sg, r)).collect();
        let section = match route {
            SectionRoute::Direct => {
                let least = VertexSet::from_unsorted(cycles.iter().map(|c| *c.iter().min().unwrap()).collect());
                if line.is_independent(&least) {
                    method = "section".into();
                    Some(least)
                } else {
                    method = "section-search".into();
                    search_section(&cycles, &ends, sg.graph.n()).map(VertexSet::from_unsorted)
                }
            }
            SectionRoute::Lll { seed } => {
                method = "section-lll".into();
                let mut cyc_edges = Vec::new();
                for c in &cycles {
                    for j in 0..c.len() {
                        cyc_edges.push((local(c[j]), local(c[(j + 1) % c.len()])));
                    }
                }
                let g2 = Graph::from_edges(sub.graph.n(), &cyc_edges)?;
                let k = cycles.iter().map(Vec::len).min().unwrap().min(LLL_SUBSET_CAP);
                let delta = sub.graph.max_degree().max(2) as u32;
                let rep = independent_complete_section(&sub.graph, &g2, k, delta, SectionSolver::default(), seed)?;
                rep.section.map(|s| VertexSet::from_unsorted(s.iter().map(|v| sub.to_original[v]).collect()))
            }
        };
        match section {
            Some(s) => {
                section_size = s.len();
                let local_s = VertexSet::from_unsorted(s.iter().map(local).collect());
                let local_parts: Vec<VertexSet> = odd_reps
                    .iter()
                    .map(|&r| VertexSet::from_unsorted(sg.edge_class(r).iter().map(local).collect()))
                    .collect();
                let sc = section_coloring(&sub.graph, &local_parts, &local_s)?;
                parts.push(ColoredPart { vertices: odd_set, colors: sc.colors, palette: sc.palette });
            }
            None => {
                let colors = misra_gries(&sg.graph);
                let check = verify_edge_coloring(&sg.graph, &colors)?;
                if !check.proper || check.palette > bound {
                    return Err(Error::AuditFailure("fallback edge coloring failed verification".into()));
                }
                return Ok(SchreierColoring {
                    classification,
                    colors,
                    palette: check.palette,
                    bound,
                    method: "vizing-fallback".into(),
                    section_size: 0,
                    proper: true,
                });
            }
        }
    }

    let union = union_coloring(&line, &parts)?;
    let check = verify_edge_coloring(&sg.graph, &union.colors)?;
    if !check.proper || union.palette as usize > bound {
        return Err(Error::AuditFailure(format!("edge coloring with palette {} fails verification", union.palette)));
    }
    Ok(SchreierColoring {
        classification,
        colors: union.colors,
        palette: union.palette as usize,
        bound,
        method,
        section_size,
        proper: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zm(m: usize, shifts: &[i64]) -> SchreierAction {
        SchreierAction::translations(&[m], &shifts.iter().map(|&s| vec![s]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn z12_classification_and_cycles() {
        let a = zm(12, &[1]);
        let c = classify(&a).unwrap();
        assert_eq!((c.size, c.even.len()), (2, 1));
        let sg = schreier_graph(&a).unwrap();
        assert_eq!(sg.graph.edge_count(), 12);
        let cycles = edge_cycles(&a, &sg, 0);
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 12);
        let b = zm(12, &[1, 6]);
        let c = classify(&b).unwrap();
        assert_eq!(c.order_two, vec!["+6".to_string()]);
        assert_eq!(c.counted_size(), 3);
        let sg = schreier_graph(&b).unwrap();
        let six = b.generators.iter().position(|g| g.name == "+6").unwrap();
        let class = sg.edge_class(six);
        assert_eq!(class.len(), 6);
        let (line, _) = sg.graph.line_graph();
        assert!(line.is_independent(&class));
    }

    #[test]
    fn invalid_actions() {
        let mut a = zm(5, &[1]);
        a.generators[1].perm = a.generators[0].perm.clone();
        assert!(a.validate().is_err());
        let fixed = SchreierAction {
            points: 3,
            generators: vec![Generator { name: "t".into(), perm: vec![1, 0, 2], inverse: "t".into(), long: false }],
        };
        assert!(fixed.validate().is_err());
        let mut b = zm(5, &[1]);
        b.generators[0].inverse = "x".into();
        assert!(b.validate().is_err());
    }

    #[test]
    fn colorings_within_bound() {
        for (a, want) in [(zm(5, &[1]), 3), (zm(12, &[1, 6]), 4), (zm(6, &[2, 3]), 4)] {
            let c = schreier_edge_coloring(&a, SectionRoute::Direct).unwrap();
            assert!(c.proper && c.palette <= want, "{a:?}");
            assert_eq!(c.bound, want);
        }
        let c5 = schreier_edge_coloring(&zm(5, &[1]), SectionRoute::Direct).unwrap();
        assert_eq!(c5.palette, 3);
    }

    #[test]
    fn two_dimensional_and_long() {
        let a = SchreierAction::translations(&[5, 7], &[vec![1, 0], vec![0, 1]]).unwrap();
        let c = schreier_edge_coloring(&a, SectionRoute::Direct).unwrap();
        assert!(c.proper && c.palette <= 5);
        let mut b = zm(12, &[1, 6]);
        for g in &mut b.generators {
            if g.name != "+6" {
                g.long = true;
            }
        }
        let c = schreier_edge_coloring(&b, SectionRoute::Direct).unwrap();
        assert_eq!(c.classification.long.len(), 1);
        assert!(c.proper && c.palette <= 4);
    }

    #[test]
    fn lll_route_on_long_cycles() {
        let a = zm(21, &[1]);
        let c = schreier_edge_coloring(&a, SectionRoute::Lll { seed: 4 }).unwrap();
        assert!(c.proper && c.palette <= 3);
    }
}

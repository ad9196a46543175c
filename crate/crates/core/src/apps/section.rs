//! Independent complete sections via the `B_F` constraints, and the `F*`
//! statistics behind their probability bound.

use std::collections::{BTreeMap, VecDeque};

use rand::Rng as _;
use serde::Serialize;

use crate::csp::{brute_force_solve, for_each_assignment, Color, Constraint, Csp, PartialColoring};
use crate::error::{Error, Result};
use crate::exact::{big_pow, rational_string, Rational};
use crate::graph::{Graph, VertexSet};
use crate::moser_tardos::moser_tardos;
use crate::seed;

/// Per-constraint enumeration cap for `B_F`.
pub const SECTION_ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SectionSolver {
    /// Moser–Tardos, then brute force under `budget` if it runs out.
    MoserTardos { max_resamples: u64, budget: usize },
    BruteForce { budget: usize },
}

impl Default for SectionSolver {
    fn default() -> Self {
        SectionSolver::MoserTardos { max_resamples: 100_000, budget: 20 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionReport {
    /// One connected `k`-subset per component of `G₂`.
    pub selected: Vec<VertexSet>,
    pub constraints: usize,
    pub p: String,
    pub d: usize,
    pub solver: String,
    pub resamples: Option<u64>,
    pub solved: bool,
    pub section: Option<VertexSet>,
    pub independent_after_deletion: bool,
    pub independent_in_g1: bool,
    pub meets_every_component: bool,
    pub failure: Option<String>,
}

/// First `k` vertices of a breadth-first search from the least vertex of
/// each component.
pub fn select_subsets(g2: &Graph, k: usize) -> Result<Vec<VertexSet>> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let mut out = Vec::new();
    for comp in g2.components() {
        if comp.len() < k {
            return Err(Error::Precondition(format!(
                "component at {} has {} vertices, fewer than k = {k}",
                comp.as_slice()[0],
                comp.len()
            )));
        }
        let start = comp.as_slice()[0];
        let mut seen = BTreeMap::from([(start, ())]);
        let mut order = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            if order.len() >= k {
                break;
            }
            for &y in g2.neighbors(x) {
                if order.len() < k && seen.insert(y, ()).is_none() {
                    order.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.push(VertexSet::from_unsorted(order));
    }
    Ok(out)
}

/// `S_f = {v : f(v) = 0 and f(u) ≠ 0 for every neighbor u}`.
pub fn extract_s(graph: &Graph, colors: &[Color]) -> VertexSet {
    VertexSet::from_unsorted(
        (0..graph.n())
            .filter(|&v| colors[v] == 0 && graph.neighbors(v).iter().all(|&u| colors[u] != 0))
            .collect(),
    )
}

/// The `B_F` constraint on `B(F, 1)`: forbids colorings in which no vertex
/// of `F` lands in `S_f`.
pub fn section_constraint(graph: &Graph, f: &VertexSet, delta: u32, cap: u128) -> Result<Constraint> {
    let dom = graph.set_ball(f, 1);
    let pos: BTreeMap<usize, usize> = dom.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let members: Vec<(usize, Vec<usize>)> = f
        .iter()
        .map(|v| (pos[&v], graph.neighbors(v).iter().map(|u| pos[u]).collect()))
        .collect();
    Constraint::from_predicate(dom.into_vec(), delta, cap, |phi| {
        !members.iter().any(|(i, nb)| phi[*i] == 0 && nb.iter().all(|&j| phi[j] != 0))
    })
}

pub fn independent_complete_section(g1: &Graph, g2: &Graph, k: usize, delta: u32, solver: SectionSolver, seed: u64) -> Result<SectionReport> {
    if g1.n() != g2.n() {
        return Err(Error::InvalidInput(format!("G1 has {} vertices, G2 has {}", g1.n(), g2.n())));
    }
    if delta < 2 {
        return Err(Error::InvalidInput("range must be at least 2".into()));
    }
    let n = g1.n();
    let selected = select_subsets(g2, k)?;
    let mut owner = vec![usize::MAX; n];
    for (i, f) in selected.iter().enumerate() {
        for v in f.iter() {
            owner[v] = i;
        }
    }
    let reduced = g1.without_edges(|u, v| owner[u] != usize::MAX && owner[u] == owner[v]);
    let cons = selected
        .iter()
        .map(|f| section_constraint(&reduced, f, delta, SECTION_ENUMERATION_CAP))
        .collect::<Result<Vec<_>>>()?;
    let csp = Csp::new(n, delta, cons)?;
    let mut report = SectionReport {
        selected: selected.clone(),
        constraints: csp.len(),
        p: rational_string(&csp.p_param()),
        d: csp.d_param(),
        solver: String::new(),
        resamples: None,
        solved: false,
        section: None,
        independent_after_deletion: false,
        independent_in_g1: false,
        meets_every_component: false,
        failure: None,
    };
    let solution = match solver {
        SectionSolver::MoserTardos { max_resamples, budget } => {
            let mt = moser_tardos(&csp, seed, max_resamples)?;
            report.resamples = Some(mt.resamples);
            match mt.solution {
                Some(f) => {
                    report.solver = "moser-tardos".into();
                    Some(f)
                }
                None => {
                    report.solver = "brute-force".into();
                    brute_fallback(&csp, budget, &mut report)
                }
            }
        }
        SectionSolver::BruteForce { budget } => {
            report.solver = "brute-force".into();
            brute_fallback(&csp, budget, &mut report)
        }
    };
    let Some(f) = solution else {
        report.failure.get_or_insert_with(|| "no coloring satisfies every B_F".into());
        return Ok(report);
    };
    report.solved = true;
    let colors = f.to_total(n)?;
    let s_f = extract_s(&reduced, &colors);
    report.independent_after_deletion = reduced.is_independent(&s_f);
    let mut picks = Vec::with_capacity(selected.len());
    for (i, sel) in selected.iter().enumerate() {
        match sel.iter().find(|&v| s_f.contains(v)) {
            Some(v) => picks.push(v),
            None => {
                report.failure = Some(format!("S_f misses selected subset {i}"));
                return Ok(report);
            }
        }
    }
    let section = VertexSet::from_unsorted(picks);
    report.independent_in_g1 = g1.is_independent(&section);
    report.meets_every_component = g2.components().iter().all(|c| c.intersects(&section));
    if !(report.independent_after_deletion && report.independent_in_g1 && report.meets_every_component) {
        return Err(Error::AuditFailure("extracted section fails verification".into()));
    }
    report.section = Some(section);
    Ok(report)
}

fn brute_fallback(csp: &Csp, budget: usize, report: &mut SectionReport) -> Option<PartialColoring> {
    match brute_force_solve(csp, budget) {
        Ok(found) => found,
        Err(e) => {
            report.failure = Some(e.to_string());
            None
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FStarStats {
    pub k: usize,
    pub delta: u32,
    pub trials: u64,
    pub neighborhood: usize,
    pub mean: f64,
    pub std: f64,
    pub min: usize,
    pub max: usize,
    /// Empirical `P[|F*| < k/8]`.
    pub below_eighth: f64,
    /// `k (1 - 1/Δ)^Δ`.
    pub expectation_bound: f64,
    /// `P[|F*| = j]` for `j = 0..=k`, when `Δ^|N|` is within the cap.
    pub exact: Option<Vec<String>>,
}

fn f_star_setup(graph: &Graph, f: &VertexSet, delta: u32) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    f.check_bounds(graph.n())?;
    if delta == 0 {
        return Err(Error::InvalidInput("range must be positive".into()));
    }
    if !graph.is_independent(f) {
        return Err(Error::Precondition("F is not independent".into()));
    }
    let nb = graph.set_ball(f, 1).difference(f);
    let pos: BTreeMap<usize, usize> = nb.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let local = f.iter().map(|v| graph.neighbors(v).iter().map(|u| pos[u]).collect()).collect();
    Ok((nb.into_vec(), local))
}

fn count_f_star(local: &[Vec<usize>], psi: &[Color]) -> usize {
    local.iter().filter(|nb| nb.iter().all(|&j| psi[j] != 0)).count()
}

/// Exact distribution of `|F*|` by enumerating all `Δ^|N|` colorings of the
/// neighborhood; `None` above `cap`.
pub fn exact_f_star_distribution(graph: &Graph, f: &VertexSet, delta: u32, cap: u128) -> Result<Option<Vec<Rational>>> {
    let (nb, local) = f_star_setup(graph, f, delta)?;
    let total = big_pow(delta as u64, nb.len());
    if total > cap.into() {
        return Ok(None);
    }
    let mut counts = vec![0u64; f.len() + 1];
    for_each_assignment(nb.len(), delta, |psi| counts[count_f_star(&local, psi)] += 1);
    Ok(Some(counts.into_iter().map(|c| Rational::new(c.into(), total.clone())).collect()))
}

pub fn estimate_f_star(graph: &Graph, f: &VertexSet, delta: u32, trials: u64, seed: u64, exact_cap: u128) -> Result<FStarStats> {
    let (nb, local) = f_star_setup(graph, f, delta)?;
    let mut rng = seed::rng(seed, "f-star", 0);
    let mut psi = vec![0; nb.len()];
    let (mut sum, mut sum_sq, mut below) = (0f64, 0f64, 0u64);
    let (mut min, mut max) = (usize::MAX, 0);
    let k = f.len();
    for _ in 0..trials {
        for c in psi.iter_mut() {
            *c = rng.random_range(0..delta);
        }
        let x = count_f_star(&local, &psi);
        sum += x as f64;
        sum_sq += (x * x) as f64;
        min = min.min(x);
        max = max.max(x);
        if (x as f64) < k as f64 / 8.0 {
            below += 1;
        }
    }
    let t = trials.max(1) as f64;
    let mean = sum / t;
    let var = if trials > 1 { (sum_sq - t * mean * mean) / (t - 1.0) } else { 0.0 };
    let exact = exact_f_star_distribution(graph, f, delta, exact_cap)?.map(|d| d.iter().map(rational_string).collect());
    Ok(FStarStats {
        k,
        delta,
        trials,
        neighborhood: nb.len(),
        mean,
        std: var.max(0.0).sqrt(),
        min: if trials == 0 { 0 } else { min },
        max,
        below_eighth: below as f64 / t,
        expectation_bound: k as f64 * (1.0 - 1.0 / delta as f64).powi(delta as i32),
        exact,
    })
}

//! Deterministic solver driven by a finite partition of bounded shattering
//! width, using thresholded conditional probabilities round by round.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::condition::{check_params, ConditionReport, LllCondition, Verdict};
use crate::csp::{brute_force_solve, Constraint, Csp, PartialColoring};
use crate::error::{Error, Result};
use crate::exact::{big_pow, cmp_exp, int, pow, Rational};
use crate::graph::{Graph, VertexSet};
use crate::shattering::{shattering_width, FinitePartition};

/// Conflict graph `H` on classes: two classes are adjacent when one
/// constraint domain meets both.
pub fn class_conflict_graph(partition: &FinitePartition, csp: &Csp) -> Result<Graph> {
    let owner = partition.class_index(csp.universe())?;
    let mut edges = Vec::new();
    for b in csp.constraints() {
        let mut met: Vec<usize> = b.domain().iter().map(|&v| owner[v]).collect();
        met.sort_unstable();
        met.dedup();
        for i in 0..met.len() {
            for j in i + 1..met.len() {
                edges.push((met[i], met[j]));
            }
        }
    }
    Graph::from_edges(partition.len(), &edges)
}

/// Rounds from a greedy proper coloring of `H`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundSchedule {
    /// Round of each class.
    pub class_round: Vec<usize>,
    /// Vertex set `U_n` of each round.
    pub rounds: Vec<VertexSet>,
    pub s: usize,
}

impl RoundSchedule {
    /// `t_n(B)`: rounds before `n` whose set meets `domain`.
    pub fn t(&self, domain: &[usize], n: usize) -> usize {
        self.rounds[..n].iter().filter(|u| domain.iter().any(|&v| u.contains(v))).count()
    }

    /// `s_n(B) = s - t_n(B)`.
    pub fn s_at(&self, domain: &[usize], n: usize) -> usize {
        self.s - self.t(domain, n)
    }

    /// Checks that every constraint meets at most `s` rounds overall.
    pub fn audit_counters(&self, csp: &Csp) -> bool {
        csp.constraints().iter().all(|b| self.t(b.domain(), self.rounds.len()) <= self.s)
    }
}

/// Greedy coloring of `H` in class order, requiring `s >= width`.
pub fn greedy_schedule(conflict: &Graph, partition: &FinitePartition, csp: &Csp, s: usize) -> Result<RoundSchedule> {
    let width = shattering_width(partition, csp)?;
    if width > s {
        return Err(Error::Precondition(format!("shattering width {width} exceeds s = {s}")));
    }
    if conflict.n() != partition.len() {
        return Err(Error::InvalidInput("conflict graph does not match the partition".into()));
    }
    let mut class_round = vec![usize::MAX; partition.len()];
    for c in 0..partition.len() {
        let used: Vec<usize> = conflict.neighbors(c).iter().map(|&o| class_round[o]).filter(|&r| r != usize::MAX).collect();
        class_round[c] = (0..).find(|r| !used.contains(r)).unwrap();
    }
    let count = class_round.iter().map(|&r| r + 1).max().unwrap_or(0);
    let mut members = vec![Vec::new(); count];
    for (c, &r) in class_round.iter().enumerate() {
        members[r].extend(partition.classes()[c].iter());
    }
    let rounds = members.into_iter().map(VertexSet::from_unsorted).collect();
    Ok(RoundSchedule { class_round, rounds, s })
}

/// `B*`: the conditionings `ψ` of `dom(B) ∩ U` with
/// `P[B | ψ] >= (e(d+1))^-(s_B - 1)`.
///
/// Only projections of forbidden tuples can reach a positive threshold, so the
/// search runs over those rather than over all `q^|dom(B) ∩ U|` conditionings.
pub fn threshold_constraint(b: &Constraint, set: &VertexSet, s_b: usize, d: usize, cap: u32) -> Result<Constraint> {
    if s_b == 0 {
        return Err(Error::Precondition("threshold exponent s(B) must be at least 1".into()));
    }
    let keep: Vec<usize> = (0..b.domain().len()).filter(|&i| set.contains(b.domain()[i])).collect();
    if keep.is_empty() {
        return Err(Error::Precondition("constraint domain does not meet U".into()));
    }
    let free = b.domain().len() - keep.len();
    let denom = big_pow(b.q() as u64, free);
    let scale = pow(&int(d as u64 + 1), (s_b - 1) as u32);
    let j = -((s_b - 1) as i64);
    let mut verdicts: HashMap<u64, bool> = HashMap::new();
    let mut forbidden = Vec::new();
    for (psi, count) in b.projection_counts(&keep) {
        let hit = match verdicts.get(&count) {
            Some(&h) => h,
            None => {
                let x = Rational::new(BigInt::from(count), denom.clone()) * &scale;
                let h = cmp_exp(&x, j, cap)?.ordering != Ordering::Less;
                verdicts.insert(count, h);
                h
            }
        };
        if hit {
            forbidden.push(psi);
        }
    }
    let domain = keep.iter().map(|&i| b.domain()[i]).collect();
    Constraint::new(domain, forbidden, b.q())
}

/// Largest precision used by a step or a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct StepReport {
    /// Constraints whose domain meets `U` (those with `η(B) = 1`).
    pub met: usize,
    /// Number of audit inequalities checked.
    pub audited: usize,
    pub max_bits: u32,
    pub d: usize,
}

#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub coloring: PartialColoring,
    /// `η(B)` per constraint.
    pub eta: Vec<bool>,
    pub report: StepReport,
}

/// One conditional-probability round: colors `U` so that every constraint
/// meeting `U` keeps `P[B/f](d+1)^(s(B)-1) < e^-(s(B)-1)`.
pub fn shattering_step(csp: &Csp, set: &VertexSet, s_of: &[usize], budget: usize, cap: u32) -> Result<StepOutcome> {
    if s_of.len() != csp.len() {
        return Err(Error::InvalidInput("one s(B) value is needed per constraint".into()));
    }
    let d = csp.d_param();
    let d1 = int(d as u64 + 1);
    let mut report = StepReport { d, ..StepReport::default() };
    let eta: Vec<bool> = csp.constraints().iter().map(|b| b.domain().iter().any(|&v| set.contains(v))).collect();
    let mut starred = Vec::new();
    for ((b, &meets), &s_b) in csp.constraints().iter().zip(&eta).zip(s_of) {
        if !meets {
            continue;
        }
        let lhs = b.probability() * pow(&d1, s_b as u32);
        let c = cmp_exp(&lhs, -(s_b as i64), cap)?;
        report.max_bits = report.max_bits.max(c.bits);
        if c.ordering != Ordering::Less {
            return Err(Error::Precondition(format!(
                "constraint on {:?} has P[B](d+1)^{s_b} >= e^-{s_b}",
                b.domain()
            )));
        }
        starred.push(threshold_constraint(b, set, s_b, d, cap)?);
    }
    report.met = starred.len();
    let star = Csp::new(csp.universe(), csp.q(), starred)?;
    let solved = brute_force_solve(&star, budget)?
        .ok_or_else(|| Error::AuditFailure("thresholded CSP has no solution".into()))?;
    let mut coloring = PartialColoring::new(csp.q());
    for v in set.iter() {
        coloring.set(v, solved.get(v).unwrap_or(0))?;
    }
    for ((b, &meets), &s_b) in csp.constraints().iter().zip(&eta).zip(s_of) {
        if !meets {
            continue;
        }
        let k = s_b - 1;
        let lhs = b.restrict(&coloring).probability() * pow(&d1, k as u32);
        let c = cmp_exp(&lhs, -(k as i64), cap)?;
        report.max_bits = report.max_bits.max(c.bits);
        report.audited += 1;
        if c.ordering != Ordering::Less {
            return Err(Error::AuditFailure(format!(
                "residual of constraint on {:?} has P[B/f](d+1)^{k} >= e^-{k}",
                b.domain()
            )));
        }
    }
    Ok(StepOutcome { coloring, eta, report })
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundReport {
    pub round: usize,
    pub classes: usize,
    pub vertices: usize,
    #[serde(flatten)]
    pub step: StepReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShatteringReport {
    pub condition: ConditionReport,
    pub width: usize,
    pub rounds: Vec<RoundReport>,
    pub verified: bool,
    #[serde(skip)]
    pub coloring: PartialColoring,
}

/// Solves `csp` given a partition of shattering width at most `s` whose
/// classes have at most `budget` variables.
pub fn shattering_solve(csp: &Csp, partition: &FinitePartition, s: usize, budget: usize, cap: u32) -> Result<ShatteringReport> {
    let width = shattering_width(partition, csp)?;
    if let Some(big) = partition.classes().iter().find(|c| c.len() > budget) {
        return Err(Error::Precondition(format!(
            "class starting at {} has {} vertices, budget is {budget}",
            big.min().unwrap(),
            big.len()
        )));
    }
    let condition = check_params(&csp.p_param(), csp.d_param(), LllCondition::Shatter(s as u32), cap)?;
    if condition.verdict != Verdict::HoldsStrictly {
        return Err(Error::ConditionViolated(format!(
            "{}: lhs {} (~{:.6}) vs rhs ~{:.6}",
            condition.inequality, condition.lhs, condition.lhs_approx, condition.rhs_approx
        )));
    }
    let conflict = class_conflict_graph(partition, csp)?;
    let schedule = greedy_schedule(&conflict, partition, csp, s)?;
    let mut current = csp.clone();
    let mut s_of = vec![s; csp.len()];
    let mut total = PartialColoring::new(csp.q());
    let mut rounds = Vec::new();
    for (n, set) in schedule.rounds.iter().enumerate() {
        let outcome = shattering_step(&current, set, &s_of, budget, cap)?;
        for (s_b, &e) in s_of.iter_mut().zip(&outcome.eta) {
            *s_b -= usize::from(e);
        }
        current = current.restrict(&outcome.coloring);
        total = total.disjoint_union(&outcome.coloring)?;
        rounds.push(RoundReport {
            round: n,
            classes: schedule.class_round.iter().filter(|&&r| r == n).count(),
            vertices: set.len(),
            step: outcome.report,
        });
    }
    for v in 0..csp.universe() {
        if total.get(v).is_none() {
            total.set(v, 0)?;
        }
    }
    if let Some(b) = current.constraints().iter().find(|b| !b.domain().is_empty() || !b.is_trivially_satisfied()) {
        return Err(Error::AuditFailure(format!("final residual {:?} is not the satisfied empty constraint", b)));
    }
    if !csp.is_solution(&total)? {
        return Err(Error::AuditFailure("output violates a constraint".into()));
    }
    Ok(ShatteringReport { condition, width, rounds, verified: true, coloring: total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{ratio, DEFAULT_PRECISION_CAP};
    use crate::graph::{cycle, path};
    use crate::shattering::{interval_separation, partition_from_separation};

    fn proper(g: &Graph, q: u32) -> Csp {
        let cons = g
            .edge_pairs()
            .into_iter()
            .map(|(u, v)| Constraint::new(vec![u, v], (0..q).map(|c| vec![c, c]), q).unwrap())
            .collect();
        Csp::new(g.n(), q, cons).unwrap()
    }

    #[test]
    fn conflict_graph_examples() {
        let csp = proper(&path(10), 3);
        assert_eq!(class_conflict_graph(&FinitePartition::singletons(10), &csp).unwrap(), path(10));
        assert_eq!(class_conflict_graph(&FinitePartition::whole(10), &csp).unwrap().edge_count(), 0);
        let blocks = FinitePartition::new(10, (0..5).map(|i| (2 * i..2 * i + 2).collect()).collect()).unwrap();
        let h = class_conflict_graph(&blocks, &csp).unwrap();
        assert_eq!(h, path(5));
        let sched = greedy_schedule(&h, &blocks, &csp, 2).unwrap();
        assert_eq!(sched.rounds.len(), 2);
        assert!(sched.audit_counters(&csp));
        assert!(greedy_schedule(&h, &blocks, &csp, 1).is_err());
    }

    #[test]
    fn threshold_examples() {
        let b = Constraint::new(vec![0, 1], (0..100).map(|c| vec![c, c]), 100).unwrap();
        let u = VertexSet::from_unsorted(vec![0]);
        assert!(threshold_constraint(&b, &u, 2, 2, DEFAULT_PRECISION_CAP).unwrap().forbidden().is_empty());
        // s_B = 1: only conditionings whose every extension violates
        let all = VertexSet::from_unsorted(vec![0, 1]);
        let t = threshold_constraint(&b, &all, 1, 2, DEFAULT_PRECISION_CAP).unwrap();
        assert_eq!(t.forbidden(), b.forbidden());
        let disjoint = VertexSet::from_unsorted(vec![5]);
        assert!(threshold_constraint(&b, &disjoint, 1, 2, DEFAULT_PRECISION_CAP).is_err());
        // q = 2, one free variable, P[B|ψ] = 1/2 against (3e)^-1 ~ 0.1226
        let b2 = Constraint::new(vec![0, 1], [vec![0, 0], vec![1, 1]], 2).unwrap();
        let t2 = threshold_constraint(&b2, &u, 2, 2, DEFAULT_PRECISION_CAP).unwrap();
        assert_eq!(t2.probability(), ratio(1, 1));
    }

    #[test]
    fn step_with_disjoint_set_changes_nothing() {
        let csp = proper(&path(4), 100);
        let out = shattering_step(&csp, &VertexSet::new(), &vec![2; csp.len()], 4, DEFAULT_PRECISION_CAP).unwrap();
        assert!(out.coloring.is_empty());
        assert_eq!(csp.restrict(&out.coloring), csp);
        assert_eq!(out.report.met, 0);
    }

    #[test]
    fn solves_long_path_with_blocks() {
        let g = path(500);
        let csp = proper(&g, 100);
        let w = interval_separation(&g, 4).unwrap();
        let part = partition_from_separation(&g, &w).unwrap();
        let rep = shattering_solve(&csp, &part, 2, 4, DEFAULT_PRECISION_CAP).unwrap();
        assert!(csp.is_solution(&rep.coloring).unwrap());
        assert_eq!(rep.rounds.len(), 2);
    }

    #[test]
    fn cycle_with_minimal_q() {
        let g = cycle(60).unwrap();
        let w = interval_separation(&g, 3).unwrap();
        let part = partition_from_separation(&g, &w).unwrap();
        let rep = shattering_solve(&proper(&g, 67), &part, 2, 3, DEFAULT_PRECISION_CAP).unwrap();
        assert!(rep.verified);
        assert!(matches!(
            shattering_solve(&proper(&g, 66), &part, 2, 3, DEFAULT_PRECISION_CAP),
            Err(Error::ConditionViolated(_))
        ));
    }

    #[test]
    fn empty_csp_gives_zeros() {
        let csp = Csp::new(5, 3, Vec::new()).unwrap();
        let rep = shattering_solve(&csp, &FinitePartition::singletons(5), 0, 1, 64).unwrap();
        assert_eq!(rep.coloring.to_total(5).unwrap(), vec![0; 5]);
    }

    #[test]
    fn single_class_is_direct_solve() {
        let csp = proper(&path(3), 40);
        let rep = shattering_solve(&csp, &FinitePartition::whole(3), 1, 3, 64).unwrap();
        assert!(csp.is_solution(&rep.coloring).unwrap());
        assert_eq!(rep.rounds.len(), 1);
    }
}

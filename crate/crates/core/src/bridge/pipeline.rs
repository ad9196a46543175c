//! End to end: reduce an LCL with a randomized algorithm to a CSP, solve it
//! with the shattering solver on a partition derived from a separation
//! witness, and decode the solution into an LCL labeling.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::reduction::{lcl_to_csp, DEFAULT_ENUMERATION_CAP};
use crate::condition::{check_params, ConditionReport, LllCondition};
use crate::error::{Error, Result};
use crate::exact::{to_f64, DEFAULT_PRECISION_CAP};
use crate::local::{check_lcl, LclProblem, LocalAlgorithm, StructuredGraph};
use crate::shattering::{verify_separation, FinitePartition, SeparationWitness};
use crate::solver::{shattering_solve, RoundReport};

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub enumeration_cap: u128,
    pub precision_cap: u32,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { enumeration_cap: DEFAULT_ENUMERATION_CAP, precision_cap: DEFAULT_PRECISION_CAP }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BallHypothesis {
    /// `max_v |B(v, 2R*)|`.
    pub max_ball: usize,
    /// `n_eff^(1/(s+1)) / e` with `n_eff = 1/p`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub r_star: usize,
    /// Histogram of `|B(v, 2R*)|`.
    pub ball_sizes: BTreeMap<usize, usize>,
    pub s: usize,
    pub budget: usize,
    pub classes: usize,
    pub condition: ConditionReport,
    pub ball_hypothesis: BallHypothesis,
    pub rounds: Vec<RoundReport>,
    pub verified: bool,
    pub output: Vec<u64>,
}

/// Witness parts reused on `G^(2R*)` (or `G` itself when `R* = 0`), with
/// components recomputed there.
pub fn reduced_partition(sg: &StructuredGraph, witness: &SeparationWitness, r_star: usize, budget: usize) -> Result<FinitePartition> {
    let g = sg.graph();
    let host = if r_star == 0 { g.clone() } else { g.power(2 * r_star)? };
    let check = verify_separation(&host, &witness.parts, budget)?;
    if !check.ok {
        return Err(Error::Precondition(format!(
            "witness parts have a component of {} vertices in the power graph, budget is {budget}",
            check.largest_component
        )));
    }
    let mut classes = Vec::new();
    for part in &witness.parts {
        classes.extend(host.induced_components(part)?);
    }
    classes.sort_by_key(|c| c.min());
    FinitePartition::new(g.n(), classes)
}

pub fn run_pipeline(
    problem: &LclProblem,
    algorithm: Arc<dyn LocalAlgorithm>,
    rounds: usize,
    label_range: u32,
    sg: &StructuredGraph,
    witness: &SeparationWitness,
    opts: &PipelineOptions,
) -> Result<PipelineReport> {
    let g = sg.graph();
    let base = verify_separation(g, &witness.parts, witness.budget)?;
    if !base.ok {
        return Err(Error::InvalidInput(format!(
            "witness has a component of {} vertices, budget is {}",
            base.largest_component, witness.budget
        )));
    }
    let reduction = lcl_to_csp(problem, Arc::clone(&algorithm), rounds, label_range, sg, opts.enumeration_cap)?;
    let csp = reduction.csp()?;
    let r_star = reduction.r_star;
    let mut ball_sizes = BTreeMap::new();
    for v in 0..g.n() {
        *ball_sizes.entry(g.ball(v, 2 * r_star)?.len()).or_insert(0) += 1;
    }
    let max_ball = ball_sizes.keys().next_back().copied().unwrap_or(0);
    let budget = witness.budget * max_ball.max(1);
    let s = witness.s();
    let p = csp.p_param();
    let condition = check_params(&p, csp.d_param(), LllCondition::Separation(s as u32), opts.precision_cap)?;
    if !condition.verdict.holds() {
        return Err(Error::ConditionViolated(format!(
            "{} fails: p = {}, d = {}, lhs = {} (~{:.6}) > rhs ~{:.6}",
            condition.inequality, condition.p, condition.d, condition.lhs, condition.lhs_approx, condition.rhs_approx
        )));
    }
    let n_eff = if p == Default::default() { f64::INFINITY } else { 1.0 / to_f64(&p) };
    let bound = n_eff.powf(1.0 / (s as f64 + 1.0)) / std::f64::consts::E;
    let ball_hypothesis = BallHypothesis { max_ball, bound, holds: max_ball as f64 <= bound };
    let partition = reduced_partition(sg, witness, r_star, budget)?;
    let solved = shattering_solve(&csp, &partition, s + 1, budget, opts.precision_cap)?;
    let theta = solved.coloring.to_total(g.n())?;
    let output = reduction.decode(&theta)?;
    let verdict = check_lcl(problem, sg, &output)?;
    if !verdict.ok {
        return Err(Error::AuditFailure(format!("decoded labeling fails the LCL at {:?}", verdict.violations)));
    }
    Ok(PipelineReport {
        r_star,
        ball_sizes,
        s,
        budget,
        classes: partition.len(),
        condition,
        ball_hypothesis,
        rounds: solved.rounds,
        verified: true,
        output,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, path};
    use crate::local::{Constant, Identity};
    use crate::shattering::interval_separation;

    #[test]
    fn always_true_succeeds() {
        let sg = StructuredGraph::plain(path(12));
        let w = interval_separation(sg.graph(), 4).unwrap();
        let rep = run_pipeline(&LclProblem::always_true(), Arc::new(Constant(0)), 0, 2, &sg, &w, &PipelineOptions::default()).unwrap();
        assert!(rep.verified);
        assert_eq!(rep.output, vec![0; 12]);
    }

    #[test]
    fn weak_coloring_on_cycle() {
        let sg = StructuredGraph::plain(cycle(40).unwrap());
        let w = interval_separation(sg.graph(), 4).unwrap();
        let rep = run_pipeline(&LclProblem::weak_coloring(), Arc::new(Identity), 0, 16, &sg, &w, &PipelineOptions::default()).unwrap();
        assert!(rep.verified);
        assert_eq!(rep.r_star, 1);
    }

    #[test]
    fn undersized_range_aborts() {
        let sg = StructuredGraph::plain(path(10));
        let w = interval_separation(sg.graph(), 4).unwrap();
        let err = run_pipeline(&LclProblem::distinct_labels(), Arc::new(Identity), 0, 40, &sg, &w, &PipelineOptions::default()).unwrap_err();
        assert!(matches!(err, Error::ConditionViolated(_)), "{err}");
    }
}

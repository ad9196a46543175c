//! Executing LOCAL algorithms and measuring LCL success.

use num_bigint::BigInt;
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use super::algorithms::LocalAlgorithm;
use super::problems::LclProblem;
use super::structured::{BallTemplate, StructuredGraph};
use crate::csp::for_each_assignment;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::seed;

fn check_labels(sg: &StructuredGraph, labels: &[u64]) -> Result<()> {
    if labels.len() != sg.n() {
        return Err(Error::InvalidInput(format!("{} labels for {} vertices", labels.len(), sg.n())));
    }
    Ok(())
}

/// Radius-`radius` ball templates of every vertex.
pub fn ball_templates(sg: &StructuredGraph, radius: usize) -> Result<Vec<BallTemplate>> {
    (0..sg.n()).into_par_iter().map(|v| BallTemplate::new(sg, v, radius)).collect()
}

/// `(A_T(G, f))(v) = A([G, f, v]_T)` for every vertex.
pub fn run_local(alg: &dyn LocalAlgorithm, sg: &StructuredGraph, labels: &[u64], rounds: usize) -> Result<Vec<u64>> {
    check_labels(sg, labels)?;
    if rounds < alg.min_radius() {
        return Err(Error::InvalidInput(format!("{} needs at least {} rounds, got {rounds}", alg.name(), alg.min_radius())));
    }
    Ok(ball_templates(sg, rounds)?.par_iter().map(|t| alg.evaluate(&t.instantiate_from(labels))).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LclCheck {
    pub ok: bool,
    pub violations: Vec<usize>,
}

pub fn check_lcl(problem: &LclProblem, sg: &StructuredGraph, labels: &[u64]) -> Result<LclCheck> {
    check_labels(sg, labels)?;
    let templates = ball_templates(sg, problem.radius)?;
    Ok(check_with_templates(problem, &templates, labels))
}

pub(crate) fn check_with_templates(problem: &LclProblem, templates: &[BallTemplate], labels: &[u64]) -> LclCheck {
    let violations: Vec<usize> = templates
        .par_iter()
        .enumerate()
        .filter(|(_, t)| !problem.verify(&t.instantiate_from(labels)))
        .map(|(v, _)| v)
        .collect();
    LclCheck { ok: violations.is_empty(), violations }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeterministicRun {
    pub output: Vec<u64>,
    pub check: LclCheck,
}

/// Runs with an ID labeling that must be a bijection onto `0..n`.
pub fn run_deterministic(alg: &dyn LocalAlgorithm, problem: &LclProblem, sg: &StructuredGraph, ids: &[u64], rounds: usize) -> Result<DeterministicRun> {
    check_labels(sg, ids)?;
    let mut seen = vec![false; ids.len()];
    for &id in ids {
        let i = id as usize;
        if i >= ids.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidInput(format!("ID assignment is not a bijection onto 0..{}", ids.len())));
        }
    }
    let output = run_local(alg, sg, ids, rounds)?;
    let check = check_lcl(problem, sg, &output)?;
    Ok(DeterministicRun { output, check })
}

pub const MAX_SWEEP_VERTICES: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct IdSweep {
    pub assignments: u64,
    pub failures: u64,
    pub counterexample: Option<Vec<u64>>,
}

/// Tries every ID bijection on a graph with at most [`MAX_SWEEP_VERTICES`]
/// vertices.
pub fn id_sweep(alg: &dyn LocalAlgorithm, problem: &LclProblem, sg: &StructuredGraph, rounds: usize) -> Result<IdSweep> {
    let n = sg.n();
    if n > MAX_SWEEP_VERTICES {
        return Err(Error::BudgetExceeded { what: "ID permutation sweep".into(), size: n as u128, budget: MAX_SWEEP_VERTICES as u128 });
    }
    let mut ids: Vec<u64> = (0..n as u64).collect();
    let mut sweep = IdSweep { assignments: 0, failures: 0, counterexample: None };
    loop {
        sweep.assignments += 1;
        if !run_deterministic(alg, problem, sg, &ids, rounds)?.check.ok {
            sweep.failures += 1;
            sweep.counterexample.get_or_insert_with(|| ids.clone());
        }
        if !next_permutation(&mut ids) {
            return Ok(sweep);
        }
    }
}

fn next_permutation(xs: &mut [u64]) -> bool {
    let Some(i) = (1..xs.len()).rev().find(|&i| xs[i - 1] < xs[i]) else {
        return false;
    };
    let j = (i..xs.len()).rev().find(|&j| xs[j] > xs[i - 1]).unwrap();
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Wilson score interval at 95% confidence.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct RandomizedRun {
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    pub interval: (f64, f64),
    /// `1 - 1/n`.
    pub threshold: f64,
    pub meets_threshold: bool,
}

/// Success rate over i.i.d. uniform labelings `θ: V -> 0..ℓ`.
pub fn run_randomized(
    alg: &dyn LocalAlgorithm,
    problem: &LclProblem,
    sg: &StructuredGraph,
    label_range: u64,
    rounds: usize,
    trials: u64,
    seed: u64,
) -> Result<RandomizedRun> {
    if label_range == 0 || trials == 0 {
        return Err(Error::InvalidInput("label range and trial count must be positive".into()));
    }
    if rounds < alg.min_radius() {
        return Err(Error::InvalidInput(format!("{} needs at least {} rounds, got {rounds}", alg.name(), alg.min_radius())));
    }
    let alg_templates = ball_templates(sg, rounds)?;
    let check_templates = ball_templates(sg, problem.radius)?;
    let successes = (0..trials)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = seed::rng(seed, "randomized-trial", i);
            let theta: Vec<u64> = (0..sg.n()).map(|_| rng.random_range(0..label_range)).collect();
            let out: Vec<u64> = alg_templates.iter().map(|t| alg.evaluate(&t.instantiate_from(&theta))).collect();
            check_with_templates(problem, &check_templates, &out).ok
        })
        .count() as u64;
    let rate = successes as f64 / trials as f64;
    let threshold = 1.0 - 1.0 / sg.n().max(1) as f64;
    Ok(RandomizedRun {
        trials,
        successes,
        rate,
        interval: wilson_interval(successes, trials),
        threshold,
        meets_threshold: rate >= threshold,
    })
}

/// Exact success probability by enumerating all `ℓ^n` labelings.
pub fn exact_success_rate(alg: &dyn LocalAlgorithm, problem: &LclProblem, sg: &StructuredGraph, label_range: u64, rounds: usize, cap: u128) -> Result<Rational> {
    let n = sg.n();
    let total = (label_range as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::BudgetExceeded { what: "exhaustive labeling enumeration".into(), size: total, budget: cap });
    }
    if label_range > u32::MAX as u64 {
        return Err(Error::InvalidInput("label range too large to enumerate".into()));
    }
    let alg_templates = ball_templates(sg, rounds)?;
    let check_templates = ball_templates(sg, problem.radius)?;
    let mut ok = 0u128;
    for_each_assignment(n, label_range as u32, |t| {
        let theta: Vec<u64> = t.iter().map(|&x| x as u64).collect();
        let out: Vec<u64> = alg_templates.iter().map(|tp| alg.evaluate(&tp.instantiate_from(&theta))).collect();
        if check_with_templates(problem, &check_templates, &out).ok {
            ok += 1;
        }
    });
    Ok(Rational::new(BigInt::from(ok), BigInt::from(total)))
}

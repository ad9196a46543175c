//! From an LCL problem and a randomized LOCAL algorithm to a CSP over the
//! random labels: the constraint at `v` lives on `B(v, R*)` with `R* = T + R`
//! and forbids the labelings on which the verifier rejects at `v`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::csp::{for_each_assignment, Color, Constraint, Csp, PartialColoring};
use crate::error::{Error, Result};
use crate::exact::{big_pow, rational_string, Rational};
use crate::local::runner::run_local;
use crate::local::{check_lcl, BallTemplate, LclProblem, LocalAlgorithm, StructuredGraph};
use crate::moser_tardos::moser_tardos;
use crate::seed;

pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

/// Failure predicate of the constraint at one vertex.
struct VertexEvaluator {
    algorithm: Arc<dyn LocalAlgorithm>,
    problem: LclProblem,
    /// For each vertex of `B(v, R)` in verifier-ball order: its `T`-ball and
    /// the positions of that ball's vertices in the constraint domain.
    views: Vec<(BallTemplate, Vec<usize>)>,
    verifier_ball: BallTemplate,
}

impl VertexEvaluator {
    fn fails(&self, theta: &[Color]) -> bool {
        let outputs: Vec<u64> = self
            .views
            .iter()
            .map(|(t, pos)| self.algorithm.evaluate(&t.instantiate(pos.iter().map(|&p| theta[p] as u64).collect())))
            .collect();
        !self.problem.verify(&self.verifier_ball.instantiate(outputs))
    }
}

/// A constraint too large to enumerate up front. Residuals are materialized
/// per conditioning and their forbidden counts memoized.
pub struct LazyConstraint {
    domain: Vec<usize>,
    q: u32,
    evaluator: VertexEvaluator,
    memo: Mutex<HashMap<Vec<Option<Color>>, u128>>,
}

impl std::fmt::Debug for LazyConstraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LazyConstraint").field("domain", &self.domain).field("q", &self.q).finish()
    }
}

impl LazyConstraint {
    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn forbids(&self, tuple: &[Color]) -> bool {
        self.evaluator.fails(tuple)
    }

    fn fixed(&self, f: &PartialColoring) -> Vec<Option<Color>> {
        self.domain.iter().map(|&v| f.get(v)).collect()
    }

    fn enumerate_residual(&self, fixed: &[Option<Color>], cap: u128, mut hit: impl FnMut(&[Color])) -> Result<()> {
        let free: Vec<usize> = (0..fixed.len()).filter(|&i| fixed[i].is_none()).collect();
        let total = (self.q as u128).checked_pow(free.len() as u32).unwrap_or(u128::MAX);
        if total > cap {
            return Err(Error::BudgetExceeded { what: "residual of a lazy constraint".into(), size: total, budget: cap });
        }
        let mut full: Vec<Color> = fixed.iter().map(|c| c.unwrap_or(0)).collect();
        for_each_assignment(free.len(), self.q, |t| {
            for (&i, &c) in free.iter().zip(t) {
                full[i] = c;
            }
            if self.evaluator.fails(&full) {
                hit(t);
            }
        });
        Ok(())
    }

    /// `B/f` as an explicit constraint.
    pub fn restrict(&self, f: &PartialColoring, cap: u128) -> Result<Constraint> {
        let fixed = self.fixed(f);
        let mut forbidden = Vec::new();
        self.enumerate_residual(&fixed, cap, |t| forbidden.push(t.to_vec()))?;
        let domain = self.domain.iter().zip(&fixed).filter(|(_, c)| c.is_none()).map(|(&v, _)| v).collect();
        Constraint::new(domain, forbidden, self.q)
    }

    /// Number of forbidden completions of `f`.
    pub fn conditional_count(&self, f: &PartialColoring, cap: u128) -> Result<u128> {
        let fixed = self.fixed(f);
        if let Some(&c) = self.memo.lock().unwrap().get(&fixed) {
            return Ok(c);
        }
        let mut count = 0u128;
        self.enumerate_residual(&fixed, cap, |_| count += 1)?;
        self.memo.lock().unwrap().insert(fixed, count);
        Ok(count)
    }

    /// `P[B | f]`.
    pub fn conditional_probability(&self, f: &PartialColoring, cap: u128) -> Result<Rational> {
        let free = self.fixed(f).iter().filter(|c| c.is_none()).count();
        Ok(Rational::new(BigInt::from(self.conditional_count(f, cap)?), big_pow(self.q as u64, free)))
    }
}

#[derive(Debug)]
pub enum ReducedConstraint {
    Explicit(Constraint),
    Lazy(LazyConstraint),
}

impl ReducedConstraint {
    pub fn domain(&self) -> &[usize] {
        match self {
            ReducedConstraint::Explicit(c) => c.domain(),
            ReducedConstraint::Lazy(l) => l.domain(),
        }
    }

    pub fn forbids(&self, tuple: &[Color]) -> bool {
        match self {
            ReducedConstraint::Explicit(c) => c.forbidden().contains(tuple),
            ReducedConstraint::Lazy(l) => l.forbids(tuple),
        }
    }

    pub fn violated_by(&self, theta: &[Color]) -> bool {
        let t: Vec<Color> = self.domain().iter().map(|&v| theta[v]).collect();
        self.forbids(&t)
    }
}

pub struct ReductionOutput {
    pub structured: StructuredGraph,
    pub problem: LclProblem,
    pub algorithm: Arc<dyn LocalAlgorithm>,
    pub rounds: usize,
    pub label_range: u32,
    pub r_star: usize,
    /// Constraint at vertex `v` is entry `v`.
    pub constraints: Vec<ReducedConstraint>,
}

impl std::fmt::Debug for ReductionOutput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReductionOutput")
            .field("problem", &self.problem.name)
            .field("algorithm", &self.algorithm.name())
            .field("rounds", &self.rounds)
            .field("label_range", &self.label_range)
            .field("r_star", &self.r_star)
            .finish()
    }
}

impl ReductionOutput {
    pub fn n(&self) -> usize {
        self.structured.n()
    }

    pub fn is_explicit(&self) -> bool {
        self.constraints.iter().all(|c| matches!(c, ReducedConstraint::Explicit(_)))
    }

    /// The explicit CSP; fails when some constraint was left lazy.
    pub fn csp(&self) -> Result<Csp> {
        let cons = self
            .constraints
            .iter()
            .enumerate()
            .map(|(v, c)| match c {
                ReducedConstraint::Explicit(c) => Ok(c.clone()),
                ReducedConstraint::Lazy(l) => Err(Error::BudgetExceeded {
                    what: format!("constraint at vertex {v}"),
                    size: (self.label_range as u128).checked_pow(l.domain.len() as u32).unwrap_or(u128::MAX),
                    budget: DEFAULT_ENUMERATION_CAP,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Csp::new(self.n(), self.label_range, cons)
    }

    /// CSP with the same domains and no forbidden tuples: enough for `d` and
    /// the dependency graph, which depend on domains only.
    pub fn domain_skeleton(&self) -> Csp {
        let cons = self
            .constraints
            .iter()
            .map(|c| Constraint::new(c.domain().to_vec(), Vec::<Vec<Color>>::new(), self.label_range).unwrap())
            .collect();
        Csp::new(self.n(), self.label_range, cons).unwrap()
    }

    pub fn is_solution(&self, theta: &[Color]) -> bool {
        self.constraints.iter().all(|c| !c.violated_by(theta))
    }

    /// `θ ↦ A_T(G, θ)`.
    pub fn decode(&self, theta: &[Color]) -> Result<Vec<u64>> {
        let labels: Vec<u64> = theta.iter().map(|&c| c as u64).collect();
        run_local(self.algorithm.as_ref(), &self.structured, &labels, self.rounds)
    }
}

/// Builds the constraint at every vertex. Constraints whose full enumeration
/// exceeds `cap` are kept lazy.
pub fn lcl_to_csp(
    problem: &LclProblem,
    algorithm: Arc<dyn LocalAlgorithm>,
    rounds: usize,
    label_range: u32,
    sg: &StructuredGraph,
    cap: u128,
) -> Result<ReductionOutput> {
    if label_range == 0 {
        return Err(Error::InvalidInput("label range must be at least 1".into()));
    }
    if rounds < algorithm.min_radius() {
        return Err(Error::InvalidInput(format!(
            "{} needs at least {} rounds, got {rounds}",
            algorithm.name(),
            algorithm.min_radius()
        )));
    }
    let r_star = rounds + problem.radius;
    let constraints = (0..sg.n())
        .into_par_iter()
        .map(|v| {
            let domain_ball = BallTemplate::new(sg, v, r_star)?;
            let domain: Vec<usize> = domain_ball.vertices().to_vec();
            let pos: HashMap<usize, usize> = domain.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let verifier_ball = BallTemplate::new(sg, v, problem.radius)?;
            let views = verifier_ball
                .vertices()
                .iter()
                .map(|&u| {
                    let t = BallTemplate::new(sg, u, rounds)?;
                    let p = t.vertices().iter().map(|x| pos[x]).collect();
                    Ok((t, p))
                })
                .collect::<Result<Vec<_>>>()?;
            let evaluator = VertexEvaluator { algorithm: Arc::clone(&algorithm), problem: problem.clone(), views, verifier_ball };
            let total = (label_range as u128).checked_pow(domain.len() as u32).unwrap_or(u128::MAX);
            if total <= cap {
                let c = Constraint::from_predicate(domain, label_range, cap, |t| evaluator.fails(t))?;
                Ok(ReducedConstraint::Explicit(c))
            } else {
                Ok(ReducedConstraint::Lazy(LazyConstraint { domain, q: label_range, evaluator, memo: Mutex::new(HashMap::new()) }))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReductionOutput {
        structured: sg.clone(),
        problem: problem.clone(),
        algorithm,
        rounds,
        label_range,
        r_star,
        constraints,
    })
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Enumerate every labeling when `ℓ^n` is at most this.
    pub enumeration_cap: u128,
    /// Random labelings drawn otherwise.
    pub samples: u64,
    /// Moser–Tardos runs used to find solutions when sampling.
    pub solver_runs: u64,
    pub solver_budget: u64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { enumeration_cap: 100_000, samples: 2_000, solver_runs: 20, solver_budget: 100_000, seed: 0 }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SolutionChecks {
    pub mode: String,
    pub examined: u64,
    pub solutions: u64,
    /// Solutions whose decoded labeling fails the LCL.
    pub decode_failures: u64,
    /// `(sample, vertex)` events where the constraint at the vertex was
    /// satisfied yet the verifier rejected there.
    pub local_failures: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    pub n: usize,
    pub r_star: usize,
    pub explicit: bool,
    pub domains_are_balls: bool,
    pub d: usize,
    pub d_bound: usize,
    pub d_within_bound: bool,
    pub dependency_in_power: bool,
    pub p: Option<String>,
    pub p_approx: Option<f64>,
    pub p_at_most_inverse_n: Option<bool>,
    pub solutions: SolutionChecks,
    pub passed: bool,
}

fn theta_of_index(mut idx: u128, n: usize, q: u32) -> Vec<Color> {
    let mut t = vec![0; n];
    for slot in t.iter_mut().rev() {
        *slot = (idx % q as u128) as Color;
        idx /= q as u128;
    }
    t
}

fn examine(out: &ReductionOutput, theta: &[Color], checks: &mut SolutionChecks) -> Result<()> {
    checks.examined += 1;
    let satisfied: Vec<bool> = out.constraints.iter().map(|c| !c.violated_by(theta)).collect();
    let decoded = out.decode(theta)?;
    let verdict = check_lcl(&out.problem, &out.structured, &decoded)?;
    checks.local_failures += verdict.violations.iter().filter(|&&v| satisfied[v]).count() as u64;
    if satisfied.iter().all(|&s| s) {
        checks.solutions += 1;
        if !verdict.ok {
            checks.decode_failures += 1;
        }
    }
    Ok(())
}

/// Structural bounds plus decode-and-verify on enumerated or sampled labelings.
pub fn verify_reduction(out: &ReductionOutput, opts: &VerifyOptions) -> Result<ReductionReport> {
    let g = out.structured.graph();
    let n = out.n();
    let domains_are_balls = (0..n).all(|v| {
        let mut d = out.constraints[v].domain().to_vec();
        d.sort_unstable();
        g.ball(v, out.r_star).map(|b| b.as_slice() == d.as_slice()).unwrap_or(false)
    });
    let skeleton = out.domain_skeleton();
    let d = skeleton.d_param();
    let d_bound = (0..n).map(|v| g.ball(v, 2 * out.r_star).map(|b| b.len())).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(1) - 1;
    let dep = skeleton.dependency_graph();
    let dependency_in_power = if out.r_star == 0 { dep.edge_count() == 0 } else { dep.is_subgraph_of(&g.power(2 * out.r_star)?) };
    let p = if out.is_explicit() { Some(out.csp()?.p_param()) } else { None };
    let inv_n = Rational::new(BigInt::from(1), BigInt::from(n.max(1)));

    let q = out.label_range;
    let total = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let mut checks = SolutionChecks::default();
    if total <= opts.enumeration_cap {
        checks.mode = "enumerated".into();
        let partial: Vec<SolutionChecks> = (0..total as u64)
            .into_par_iter()
            .map(|i| {
                let theta = theta_of_index(i as u128, n, q);
                let mut c = SolutionChecks::default();
                if out.is_solution(&theta) {
                    examine(out, &theta, &mut c)?;
                } else {
                    c.examined += 1;
                }
                Ok(c)
            })
            .collect::<Result<Vec<_>>>()?;
        for c in partial {
            checks.examined += c.examined;
            checks.solutions += c.solutions;
            checks.decode_failures += c.decode_failures;
            checks.local_failures += c.local_failures;
        }
    } else {
        checks.mode = "sampled".into();
        let mut rng = seed::rng(opts.seed, "reduction-samples", 0);
        for _ in 0..opts.samples {
            let theta: Vec<Color> = (0..n).map(|_| rng.random_range(0..q)).collect();
            examine(out, &theta, &mut checks)?;
        }
        if out.is_explicit() {
            let csp = out.csp()?;
            for run in 0..opts.solver_runs {
                let mt = moser_tardos(&csp, seed::derive_seed(opts.seed, "reduction-solver", run), opts.solver_budget)?;
                if let Some(sol) = mt.solution {
                    examine(out, &sol.to_total(n)?, &mut checks)?;
                }
            }
        }
    }
    let d_within_bound = d <= d_bound;
    let passed = domains_are_balls && d_within_bound && dependency_in_power && checks.decode_failures == 0 && checks.local_failures == 0;
    Ok(ReductionReport {
        n,
        r_star: out.r_star,
        explicit: out.is_explicit(),
        domains_are_balls,
        d,
        d_bound,
        d_within_bound,
        dependency_in_power,
        p_approx: p.as_ref().map(crate::exact::to_f64),
        p_at_most_inverse_n: p.as_ref().map(|p| *p <= inv_n),
        p: p.as_ref().map(rational_string),
        solutions: checks,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::graph::{cycle, path};
    use crate::local::{Constant, Identity, LubyMis};

    #[test]
    fn always_true_gives_empty_constraints() {
        let sg = StructuredGraph::plain(cycle(6).unwrap());
        let out = lcl_to_csp(&LclProblem::always_true(), Arc::new(Constant(0)), 0, 3, &sg, DEFAULT_ENUMERATION_CAP).unwrap();
        let csp = out.csp().unwrap();
        assert_eq!(csp.p_param(), ratio(0, 1));
        assert!(verify_reduction(&out, &VerifyOptions::default()).unwrap().passed);
    }

    #[test]
    fn distinct_labels_on_an_edge() {
        let sg = StructuredGraph::plain(path(2));
        let out = lcl_to_csp(&LclProblem::distinct_labels(), Arc::new(Identity), 0, 2, &sg, DEFAULT_ENUMERATION_CAP).unwrap();
        let csp = out.csp().unwrap();
        assert_eq!(csp.p_param(), ratio(1, 2));
        for b in csp.constraints() {
            assert_eq!(b.forbidden().len(), 2);
        }
        let rep = verify_reduction(&out, &VerifyOptions::default()).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.solutions.solutions, 2);
    }

    #[test]
    fn c10_bound_with_radius_two() {
        let sg = StructuredGraph::plain(cycle(10).unwrap());
        let out = lcl_to_csp(&LclProblem::distinct_labels(), Arc::new(Identity), 1, 3, &sg, DEFAULT_ENUMERATION_CAP).unwrap();
        let rep = verify_reduction(&out, &VerifyOptions { samples: 200, ..VerifyOptions::default() }).unwrap();
        assert_eq!(out.r_star, 2);
        assert_eq!(rep.d_bound, 8);
        assert!(rep.d <= 8 && rep.passed);
    }

    #[test]
    fn luby_on_c8_enumerated() {
        let sg = StructuredGraph::plain(cycle(8).unwrap());
        let out = lcl_to_csp(&LclProblem::mis(), Arc::new(LubyMis { phases: 1 }), 2, 3, &sg, DEFAULT_ENUMERATION_CAP).unwrap();
        let rep = verify_reduction(&out, &VerifyOptions::default()).unwrap();
        assert_eq!(rep.solutions.mode, "enumerated");
        assert!(rep.solutions.solutions > 0);
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn lazy_constraints_agree_with_explicit() {
        let sg = StructuredGraph::plain(cycle(6).unwrap());
        let explicit = lcl_to_csp(&LclProblem::distinct_labels(), Arc::new(Identity), 0, 4, &sg, DEFAULT_ENUMERATION_CAP).unwrap();
        let lazy = lcl_to_csp(&LclProblem::distinct_labels(), Arc::new(Identity), 0, 4, &sg, 10).unwrap();
        assert!(!lazy.is_explicit());
        assert!(lazy.csp().is_err());
        let f = PartialColoring::from_pairs(4, [(0, 1)]).unwrap();
        for (e, l) in explicit.constraints.iter().zip(&lazy.constraints) {
            let (ReducedConstraint::Explicit(e), ReducedConstraint::Lazy(l)) = (e, l) else { panic!() };
            assert_eq!(e.restrict(&f).normalized(), l.restrict(&f, 1000).unwrap().normalized());
            assert_eq!(e.restrict(&f).probability(), l.conditional_probability(&f, 1000).unwrap());
            assert_eq!(e.probability(), l.conditional_probability(&PartialColoring::new(4), 1000).unwrap());
        }
    }
}

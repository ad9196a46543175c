//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{count_solutions, random_constraint, rng};
use lllkit::apps::section::{estimate_f_star, exact_f_star_distribution};
use lllkit::apps::sinkless::default_choice;
use lllkit::apps::{
    chromatic_index, proper_coloring_csp, schreier_edge_coloring, schreier_graph, sinkless_orientation_csp, SchreierAction,
    SectionRoute,
};
use lllkit::bridge::{lcl_to_csp, verify_reduction, VerifyOptions};
use lllkit::condition::{check_params, LllCondition, Verdict};
use lllkit::csp::{brute_force_solve, for_each_assignment, Color, Constraint, Csp, PartialColoring};
use lllkit::exact::{cmp_exp, cmp_exp_at, cmp_exp_from, int, pow, Decision, Rational, PRECISION_LADDER};
use lllkit::graph::{cycle, path, random_gnp, random_regular, Graph, VertexSet};
use lllkit::local::{
    check_lcl, run_local, GreedyById, Identity, LclProblem, LocalAlgorithm, LubyMis, StructuredGraph, UniformColorTrial,
};
use lllkit::shattering::{interval_separation, partition_from_separation, shattering_width, FinitePartition};
use lllkit::solver::{shattering_solve, threshold_constraint};
use lllkit::Error;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ratio(a: u64, b: u64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

/// Probability by counting forbidden tuples against `q^|dom|`.
fn count_probability(b: &Constraint) -> Rational {
    Rational::new(BigInt::from(b.forbidden().len()), BigInt::from(b.q()).pow(b.domain().len() as u32))
}

/// Fraction of completions of `psi` (indexed like `positions`) that `b` forbids.
fn completion_probability(b: &Constraint, positions: &[usize], psi: &[Color]) -> Rational {
    let free: Vec<usize> = (0..b.domain().len()).filter(|i| !positions.contains(i)).collect();
    let mut hits = 0u64;
    let mut total = 0u64;
    for_each_assignment(free.len(), b.q(), |rest| {
        let mut t = vec![0; b.domain().len()];
        for (&i, &c) in positions.iter().zip(psi) {
            t[i] = c;
        }
        for (&i, &c) in free.iter().zip(rest) {
            t[i] = c;
        }
        total += 1;
        if b.forbidden().contains(&t) {
            hits += 1;
        }
    });
    ratio(hits, total)
}

fn random_subset(r: &mut impl Rng, n: usize) -> VertexSet {
    VertexSet::from_unsorted((0..n).filter(|_| r.random_bool(0.5)).collect())
}

fn proper_on_edges(g: &Graph, colors: &[Color]) -> bool {
    g.edge_pairs().iter().all(|&(u, v)| colors[u] != colors[v])
}

fn c1_sinkless() -> Check {
    let mut cases = 0;
    for d in 2..=5usize {
        for seed in 0..6u64 {
            let mut r = rng(seed * 10 + d as u64);
            let mut n = r.random_range(d + 1..=200);
            if (n * d) % 2 == 1 {
                n -= 1;
            }
            let g = random_regular(n, d, seed).map_err(|e| e.to_string())?;
            let csp = sinkless_orientation_csp(&g, &default_choice(&g)).map_err(|e| e.to_string())?;
            let p = csp.p_param();
            ensure!(&p * pow(&int(2), d as u32) == int(1), "d={d} n={n}: p = {p}");
            ensure!(csp.d_param() == d, "d={d} n={n}: d_param = {}", csp.d_param());
            for b in csp.constraints() {
                ensure!(b.domain().len() == d && b.forbidden().len() == 1, "vertex constraint is not a single tuple on d edges");
                ensure!(count_probability(b) * pow(&int(2), d as u32) == int(1), "oracle probability mismatch");
            }
            let sets: Vec<BTreeSet<usize>> = csp.constraints().iter().map(|b| b.domain().iter().copied().collect()).collect();
            let oracle_d = (0..sets.len())
                .map(|i| (0..sets.len()).filter(|&j| j != i && !sets[i].is_disjoint(&sets[j])).count())
                .max()
                .unwrap();
            ensure!(oracle_d == d, "oracle d = {oracle_d}");
            cases += 1;
        }
    }
    Ok(format!("{cases} regular graphs, d in 2..=5, p*2^d = 1 exactly"))
}

fn c2_double_counting() -> Check {
    let mut r = rng(2);
    let trials = 1200;
    for i in 0..trials {
        let q = r.random_range(1..=4u32);
        let len = r.random_range(0..=6usize);
        let density = r.random_range(0.0..1.0);
        let b = random_constraint(&mut r, 8, len, q, density);
        let set = random_subset(&mut r, 8);
        let positions: Vec<usize> = (0..b.domain().len()).filter(|&k| set.contains(b.domain()[k])).collect();
        let mut sum = Rational::zero();
        let mut count = 0u64;
        let mut err = None;
        for_each_assignment(positions.len(), q, |psi| {
            let f = PartialColoring::from_pairs(q, positions.iter().zip(psi).map(|(&k, &c)| (b.domain()[k], c))).unwrap();
            match b.conditional_probability(&f, &set) {
                Ok(x) => {
                    if x != completion_probability(&b, &positions, psi) {
                        err = Some(format!("instance {i}: conditional probability differs from oracle"));
                    }
                    sum += x;
                }
                Err(e) => err = Some(e.to_string()),
            }
            count += 1;
        });
        if let Some(e) = err {
            return Err(e);
        }
        let avg = sum / Rational::from_integer(BigInt::from(count));
        ensure!(avg == b.probability(), "instance {i}: average {avg} vs P[B] {}", b.probability());
        ensure!(avg == count_probability(&b), "instance {i}: oracle P[B] mismatch");
    }
    Ok(format!("{trials} random (B, U), exact equality"))
}

fn c3_markov() -> Check {
    let mut r = rng(3);
    let trials = 600;
    let mut nonempty = 0;
    for i in 0..trials {
        let q = r.random_range(2..=4u32);
        let len = r.random_range(1..=5usize);
        let density = r.random_range(0.0..0.6);
        let b = random_constraint(&mut r, 8, len, q, density);
        let s = r.random_range(1..=3usize);
        let d = r.random_range(0..=6usize);
        let mut set = random_subset(&mut r, 8);
        if !b.domain().iter().any(|&v| set.contains(v)) {
            set = VertexSet::from_unsorted(vec![b.domain()[0]]);
        }
        let star = threshold_constraint(&b, &set, s, d, 1024).map_err(|e| format!("instance {i}: {e}"))?;
        let positions: Vec<usize> = (0..b.domain().len()).filter(|&k| set.contains(b.domain()[k])).collect();
        let scale = pow(&int(d as u64 + 1), (s - 1) as u32);
        let mut want = BTreeSet::new();
        let mut err = None;
        for_each_assignment(positions.len(), q, |psi| {
            let x = completion_probability(&b, &positions, psi) * &scale;
            match cmp_exp(&x, -((s - 1) as i64), 1024) {
                Ok(c) if c.ordering != Ordering::Less => {
                    want.insert(psi.to_vec());
                }
                Ok(_) => {}
                Err(e) => err = Some(e.to_string()),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let got: BTreeSet<Vec<Color>> = star.forbidden().iter().cloned().collect();
        ensure!(got == want, "instance {i}: B* differs from the enumerated threshold set");
        let pb = b.probability();
        let pstar = star.probability();
        if pb.is_zero() {
            ensure!(pstar.is_zero(), "instance {i}: P[B] = 0 but P[B*] > 0");
            continue;
        }
        nonempty += usize::from(!pstar.is_zero());
        let x = pstar / (pb * scale);
        let c = cmp_exp(&x, (s - 1) as i64, 1024).map_err(|e| e.to_string())?;
        ensure!(c.ordering != Ordering::Greater, "instance {i}: P[B*] exceeds P[B](e(d+1))^(s-1)");
    }
    Ok(format!("{trials} constraints, s in 1..=3, {nonempty} with nonempty B*"))
}

fn c4_shattering() -> Check {
    let mut r = rng(4);
    let mut rounds = 0;
    let mut audited = 0;
    for i in 0..100 {
        let budget = [3, 4, 8][i % 3];
        let n = r.random_range(2 * budget..=2000);
        let g = if i % 2 == 0 { cycle(n).map_err(|e| e.to_string())? } else { path(n) };
        let q = r.random_range(67..=120u32);
        let csp = proper_coloring_csp(&g, q).map_err(|e| e.to_string())?;
        // Independent threshold check: p = 1/q, d = 2 on cycles.
        let lhs = ratio(9, q as u64);
        ensure!(cmp_exp(&lhs, -2, 1024).unwrap().ordering == Ordering::Less, "q = {q} below threshold");
        let w = interval_separation(&g, budget).map_err(|e| e.to_string())?;
        ensure!(w.s() == 1, "interval witness has {} parts", w.parts.len());
        let part = partition_from_separation(&g, &w).map_err(|e| e.to_string())?;
        let rep = shattering_solve(&csp, &part, 2, budget, 1024).map_err(|e| format!("instance {i} (n={n}, q={q}, L={budget}): {e}"))?;
        let colors = rep.coloring.to_total(n).map_err(|e| e.to_string())?;
        ensure!(colors.len() == n && colors.iter().all(|&c| c < q), "instance {i}: coloring out of range");
        ensure!(proper_on_edges(&g, &colors), "instance {i}: coloring is not proper");
        ensure!(rep.verified, "instance {i}: solver did not verify");
        for round in &rep.rounds {
            ensure!(round.step.audited == round.step.met, "instance {i} round {}: audit skipped constraints", round.round);
            audited += round.step.audited;
        }
        rounds += rep.rounds.len();
    }
    Ok(format!("100/100 colorings verified, {rounds} rounds, {audited} audit inequalities"))
}

fn c5_oracle() -> Check {
    let mut r = rng(5);
    let mut held = 0;
    let mut sat = 0;
    let total = 240;
    for i in 0..total {
        let q = r.random_range(2..=4u32);
        let max_n = match q {
            2 => 12,
            3 => 10,
            _ => 8,
        };
        let n = r.random_range(4..=max_n);
        // Modes: sparse single-tuple constraints on a coarse partition, or
        // dense random constraints on a fine one.
        let sparse = i % 3 != 0;
        let m = r.random_range(1..=n);
        let min_len = if sparse { if q == 2 { 3 } else { 2 } } else { 1 };
        let cons: Vec<Constraint> = (0..m)
            .map(|_| {
                let len = r.random_range(min_len..=4.min(n));
                if sparse {
                    let b = random_constraint(&mut r, n, len, q, 0.0);
                    let t: Vec<Color> = (0..len).map(|_| r.random_range(0..q)).collect();
                    Constraint::new(b.domain().to_vec(), [t], q).unwrap()
                } else {
                    random_constraint(&mut r, n, len, q, 0.35)
                }
            })
            .collect();
        let csp = Csp::new(n, q, cons).map_err(|e| e.to_string())?;
        let k = if sparse { r.random_range(1..=2) } else { r.random_range(1..=n.div_ceil(2)) };
        let mut classes = vec![Vec::new(); k];
        for v in 0..n {
            classes[r.random_range(0..k)].push(v);
        }
        let classes: Vec<VertexSet> = classes.into_iter().filter(|c| !c.is_empty()).map(VertexSet::from_unsorted).collect();
        let part = FinitePartition::new(n, classes).map_err(|e| e.to_string())?;
        let s = shattering_width(&part, &csp).map_err(|e| e.to_string())?.max(1);
        let budget = part.max_class_size();

        let oracle = count_solutions(&csp) > 0;
        let brute = brute_force_solve(&csp, n).map_err(|e| e.to_string())?;
        ensure!(brute.is_some() == oracle, "instance {i}: brute force disagrees with enumeration");
        if let Some(f) = &brute {
            ensure!(csp.violated(f).unwrap().is_empty(), "instance {i}: brute-force output violates a constraint");
        }
        sat += usize::from(oracle);
        match shattering_solve(&csp, &part, s, budget, 1024) {
            Ok(rep) => {
                held += 1;
                ensure!(oracle, "instance {i}: shattering solved an unsatisfiable CSP");
                ensure!(csp.violated(&rep.coloring).unwrap().is_empty(), "instance {i}: shattering output violates a constraint");
            }
            Err(Error::ConditionViolated(_)) => {
                let lhs = csp.p_param() * pow(&int(csp.d_param() as u64 + 1), s as u32);
                let c = cmp_exp(&lhs, -(s as i64), 1024).unwrap();
                ensure!(c.ordering != Ordering::Less, "instance {i}: condition refused although it holds");
            }
            Err(e) => return Err(format!("instance {i}: {e}")),
        }
    }
    ensure!(held >= 50, "only {held} instances met the preconditions");
    Ok(format!("{total} CSPs, {sat} satisfiable, {held} met the shattering preconditions and matched brute force"))
}

fn c6_reduction() -> Check {
    let mut summary = Vec::new();
    let cases: Vec<(usize, LclProblem, Arc<dyn LocalAlgorithm>, usize, u32)> = vec![
        (8, LclProblem::distinct_labels(), Arc::new(Identity), 1, 8),
        (10, LclProblem::distinct_labels(), Arc::new(Identity), 1, 8),
        (8, LclProblem::mis(), Arc::new(LubyMis { phases: 1 }), 2, 3),
        (10, LclProblem::mis(), Arc::new(LubyMis { phases: 1 }), 2, 3),
        (8, LclProblem::mis(), Arc::new(LubyMis { phases: 1 }), 2, 4),
    ];
    for (n, problem, alg, t, ell) in cases {
        let g = cycle(n).unwrap();
        let sg = StructuredGraph::plain(g.clone());
        let out = lcl_to_csp(&problem, Arc::clone(&alg), t, ell, &sg, 1_000_000).map_err(|e| e.to_string())?;
        let tag = format!("C{n} {} T={t} l={ell}", alg.name());
        let rep = verify_reduction(&out, &VerifyOptions { seed: n as u64, ..VerifyOptions::default() }).map_err(|e| e.to_string())?;
        ensure!(rep.passed, "{tag}: {rep:?}");
        ensure!(rep.solutions.decode_failures == 0 && rep.solutions.solutions > 0, "{tag}: {:?}", rep.solutions);

        let r_star = t + problem.radius;
        let ball2 = (0..n).map(|v| g.ball(v, 2 * r_star).unwrap().len()).max().unwrap();
        let skeleton = out.domain_skeleton();
        ensure!(skeleton.d_param() < ball2, "{tag}: d = {} vs ball {ball2}", skeleton.d_param());
        let power = g.power(2 * r_star).unwrap();
        ensure!(skeleton.dependency_graph().is_subgraph_of(&power), "{tag}: dependency graph escapes G^(2R*)");

        // Independent decode check on randomly sampled solutions.
        let csp = out.csp().map_err(|e| e.to_string())?;
        let mut r = rng(60 + n as u64);
        let mut found = 0;
        for _ in 0..20_000 {
            let theta: Vec<Color> = (0..n).map(|_| r.random_range(0..ell)).collect();
            let f = PartialColoring::from_total(ell, &theta).unwrap();
            if csp.is_solution(&f).unwrap() {
                found += 1;
                let labels: Vec<u64> = theta.iter().map(|&c| c as u64).collect();
                let decoded = run_local(alg.as_ref(), &sg, &labels, t).unwrap();
                ensure!(check_lcl(&problem, &sg, &decoded).unwrap().ok, "{tag}: solution decodes to an invalid labeling");
            }
        }
        summary.push(format!("{tag}: {} checked, {found} resampled", rep.solutions.solutions));
    }
    Ok(summary.join("; "))
}

fn c7_schreier() -> Check {
    let zm: Vec<(usize, Vec<i64>)> = vec![
        (5, vec![1]),
        (12, vec![1]),
        (6, vec![1, 3]),
        (8, vec![1, 4]),
        (12, vec![1, 6]),
        (30, vec![1, 15]),
        (6, vec![2, 3]),
        (5, vec![1, 2]),
        (7, vec![1, 2]),
        (9, vec![1, 3]),
        (40, vec![1, 2]),
        (8, vec![1, 2, 4]),
        (10, vec![1, 3, 5]),
        (60, vec![1, 7, 30]),
        (21, vec![1, 2]),
    ];
    let zab: Vec<(usize, usize, Vec<Vec<i64>>)> = vec![
        (3, 4, vec![vec![1, 0], vec![0, 1]]),
        (5, 5, vec![vec![1, 0], vec![0, 1]]),
        (6, 10, vec![vec![1, 0], vec![0, 1]]),
        (4, 3, vec![vec![1, 0], vec![0, 1], vec![2, 0]]),
        (6, 5, vec![vec![1, 0], vec![0, 1], vec![3, 0]]),
        (4, 6, vec![vec![2, 0], vec![0, 3]]),
        (5, 4, vec![vec![1, 0], vec![0, 2]]),
        (3, 3, vec![vec![1, 0], vec![0, 1]]),
    ];
    let mut actions = Vec::new();
    for (m, s) in zm {
        actions.push((format!("Z{m}{s:?}"), SchreierAction::translations(&[m], &s.into_iter().map(|x| vec![x]).collect::<Vec<_>>())));
    }
    for (a, b, s) in zab {
        actions.push((format!("Z{a}xZ{b}{s:?}"), SchreierAction::translations(&[a, b], &s)));
    }
    let count = actions.len();
    let mut sizes = BTreeSet::new();
    let mut exact = 0;
    let mut fallbacks = 0;
    let mut lll_refused = 0;
    for (idx, (name, a)) in actions.into_iter().enumerate() {
        let a = a.map_err(|e| format!("{name}: {e}"))?;
        let f = a.generators.len();
        ensure!((2..=5).contains(&f), "{name}: |F| = {f}");
        sizes.insert(f);
        let sg = schreier_graph(&a).map_err(|e| e.to_string())?;
        let routes = if idx % 3 == 0 { vec![SectionRoute::Direct, SectionRoute::Lll { seed: idx as u64 }] } else { vec![SectionRoute::Direct] };
        for route in routes {
            let col = match schreier_edge_coloring(&a, route) {
                Ok(c) => c,
                Err(Error::BudgetExceeded { .. }) if matches!(route, SectionRoute::Lll { .. }) => {
                    lll_refused += 1;
                    continue;
                }
                Err(e) => return Err(format!("{name}: {e}")),
            };
            let edges = sg.graph.edges();
            ensure!(col.colors.len() == edges.len(), "{name}: {} colors for {} edges", col.colors.len(), edges.len());
            let mut seen = vec![BTreeSet::new(); sg.graph.n()];
            for e in &edges {
                let c = col.colors[e.index];
                ensure!(seen[e.u].insert(c) && seen[e.v].insert(c), "{name}: two edges at a vertex share color {c}");
            }
            let palette = col.colors.iter().collect::<BTreeSet<_>>().len();
            ensure!(palette <= f + 1, "{name}: palette {palette} > |F|+1 = {}", f + 1);
            fallbacks += usize::from(col.method == "vizing-fallback");
            if edges.len() <= 40 {
                let chi = chromatic_index(&sg.graph, 40).map_err(|e| e.to_string())?;
                ensure!(chi <= palette, "{name}: chromatic index {chi} above palette {palette}");
                ensure!(chi >= sg.graph.max_degree(), "{name}: chromatic index below max degree");
                exact += 1;
            }
        }
    }
    ensure!(sizes.len() == 4, "generator sizes covered: {sizes:?}");
    Ok(format!("{count} actions, |F| in {sizes:?}, {exact} exact cross-checks, {fallbacks} fallback colorings, {lll_refused} LLL-route budget refusals"))
}

/// Enumerated `P[|F*| = j]`.
fn f_star_oracle(g: &Graph, f: &[usize], delta: u32) -> Vec<Rational> {
    let fs: BTreeSet<usize> = f.iter().copied().collect();
    let nb: Vec<usize> = f.iter().flat_map(|&v| g.neighbors(v).to_vec()).collect::<BTreeSet<_>>().into_iter().collect();
    let mut counts = vec![0u64; f.len() + 1];
    let mut total = 0u64;
    for_each_assignment(nb.len(), delta, |psi| {
        let color = |u: usize| psi[nb.binary_search(&u).unwrap()];
        let size = f.iter().filter(|&&v| g.neighbors(v).iter().filter(|u| !fs.contains(u)).all(|&u| color(u) != 0)).count();
        counts[size] += 1;
        total += 1;
    });
    counts.into_iter().map(|c| ratio(c, total)).collect()
}

fn independent_set(g: &Graph, k: usize, seed: u64) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(&mut rng(seed));
    let mut chosen: Vec<usize> = Vec::new();
    for v in order {
        if chosen.len() == k {
            break;
        }
        if chosen.iter().all(|&u| u != v && !g.has_edge(u, v)) {
            chosen.push(v);
        }
    }
    (chosen.len() == k).then_some(chosen)
}

fn c8_f_star() -> Check {
    let mut lines = Vec::new();
    for (delta, k) in [(2u32, 16usize), (3, 24), (4, 40)] {
        let g = random_regular(6 * k, delta as usize, 80 + k as u64).map_err(|e| e.to_string())?;
        let f = independent_set(&g, k, 8).ok_or("no independent set")?;
        let st = estimate_f_star(&g, &VertexSet::from_unsorted(f), delta, 10_000, 8, 100_000).map_err(|e| e.to_string())?;
        let bound = k as f64 * (1.0 - 1.0 / delta as f64).powi(delta as i32);
        let slack = 3.0 * st.std / (st.trials as f64).sqrt();
        ensure!(st.trials == 10_000, "trials = {}", st.trials);
        ensure!(st.mean >= bound - slack, "(Δ={delta}, k={k}): mean {} < {bound} - {slack}", st.mean);
        lines.push(format!("(Δ={delta},k={k}) mean {:.3} vs {:.3}", st.mean, bound));
    }
    let mut exact = 0;
    for (delta, k, n, seed) in [(2u32, 3usize, 12usize, 1u64), (2, 4, 16, 2), (3, 2, 10, 3), (3, 3, 14, 4), (4, 2, 10, 5)] {
        let g = random_regular(n, delta as usize, seed).map_err(|e| e.to_string())?;
        let f = independent_set(&g, k, seed).ok_or("no independent set")?;
        let set = VertexSet::from_unsorted(f.clone());
        let got = exact_f_star_distribution(&g, &set, delta, 100_000).map_err(|e| e.to_string())?;
        let got = got.ok_or(format!("(Δ={delta}, k={k}) exact distribution refused"))?;
        let want = f_star_oracle(&g, &f, delta);
        ensure!(got == want, "(Δ={delta}, k={k}) exact distribution differs from enumeration");
        let mean: Rational = want.iter().enumerate().map(|(j, p)| p * Rational::from_integer(BigInt::from(j))).sum();
        let per = pow(&ratio(delta as u64 - 1, delta as u64), delta);
        ensure!(mean == per * Rational::from_integer(BigInt::from(k)), "(Δ={delta}, k={k}) exact mean is not k(1-1/Δ)^Δ");
        exact += 1;
    }
    lines.push(format!("{exact} exact distributions matched"));
    Ok(lines.join("; "))
}

/// Bounds on `e` from the Taylor series with 80 terms.
fn e_interval() -> (Rational, Rational) {
    let mut sum = Rational::zero();
    let mut fact = BigInt::one();
    for k in 0..80u32 {
        if k > 0 {
            fact *= k;
        }
        sum += Rational::new(BigInt::one(), fact.clone());
    }
    let tail = Rational::new(BigInt::from(2), fact * 80u32);
    (sum.clone(), sum + tail)
}

fn c9_stability() -> Check {
    let (e_lo, e_hi) = e_interval();
    let mut cases: Vec<(Rational, u32, usize, Ordering)> = Vec::new();
    for s in 1..=4u32 {
        // e^-s lies within (1/e_hi^s, 1/e_lo^s), an interval far narrower than 1e-40.
        let lo = pow(&e_hi, s).recip();
        let hi = pow(&e_lo, s).recip();
        for t in [3u32, 10, 18, 19, 20, 25, 29, 30] {
            let delta = Rational::new(BigInt::one(), BigInt::from(10).pow(t));
            for d in [1usize, 2, 5, 40] {
                let scale = pow(&int(d as u64 + 1), s);
                cases.push(((&hi + &delta) / &scale, s, d, Ordering::Greater));
                cases.push(((&lo - &delta) / &scale, s, d, Ordering::Less));
            }
        }
    }
    let mut r = rng(9);
    for _ in 0..200 {
        let s = r.random_range(1..=4u32);
        let d = r.random_range(0..=50usize);
        let p = ratio(r.random_range(1..1000), r.random_range(1000..100_000_000));
        let lhs = &p * pow(&int(d as u64 + 1), s);
        let truth = if lhs < pow(&e_hi, s).recip() { Ordering::Less } else if lhs > pow(&e_lo, s).recip() { Ordering::Greater } else { continue };
        cases.push((p, s, d, truth));
    }
    let mut undecided_64 = 0;
    for (i, (p, s, d, truth)) in cases.iter().enumerate() {
        let cond = if *s == 1 { LllCondition::Classic } else { LllCondition::Shatter(*s) };
        let lhs = p * pow(&int(*d as u64 + 1), *s);
        for bits in PRECISION_LADDER {
            let dec = cmp_exp_at(&lhs, -(*s as i64), bits);
            ensure!(dec == Decision::Undecided || dec.ordering() == Some(*truth), "case {i} at {bits} bits: {dec:?}, truth {truth:?}");
            if bits == 64 && dec == Decision::Undecided {
                undecided_64 += 1;
            }
            let c = cmp_exp_from(&lhs, -(*s as i64), bits, 1024).map_err(|e| format!("case {i} from {bits}: {e}"))?;
            ensure!(c.ordering == *truth, "case {i} escalating from {bits}: {:?}", c.ordering);
        }
        let want = if *truth == Ordering::Less { Verdict::HoldsStrictly } else { Verdict::Fails };
        let rep = check_params(p, *d, cond, 1024).map_err(|e| e.to_string())?;
        ensure!(rep.verdict == want, "case {i}: verdict {:?}", rep.verdict);
    }
    Ok(format!("{} cases, identical verdicts from 64/256/1024 bits, {undecided_64} needed escalation past 64", cases.len()))
}

fn c10_locality() -> Check {
    let mut r = rng(10);
    let algs: Vec<(Box<dyn LocalAlgorithm>, usize)> = vec![
        (Box::new(GreedyById), 2),
        (Box::new(GreedyById), 3),
        (Box::new(LubyMis { phases: 1 }), 2),
        (Box::new(LubyMis { phases: 2 }), 4),
        (Box::new(UniformColorTrial { q: 3 }), 1),
        (Box::new(Identity), 0),
    ];
    let mut edge_edits = 0;
    for i in 0..100u64 {
        let n = 40;
        let g = random_gnp(n, 0.08, 1000 + i);
        let (alg, t) = &algs[i as usize % algs.len()];
        let mut labels: Vec<u64> = (0..n as u64).map(|x| x * 7 + 3).collect();
        labels.shuffle(&mut r);
        let v = r.random_range(0..n);
        let dist = g.distances_within(v, t + 1);
        let far = |u: usize| dist[u].is_none_or(|x| x > *t);
        let mut mutated = labels.clone();
        for u in 0..n {
            if far(u) && r.random_bool(0.7) {
                mutated[u] = 1_000 + r.random_range(0..1_000_000);
            }
        }
        let mut pairs = g.edge_pairs();
        pairs.retain(|&(a, b)| !(far(a) && far(b) && r.random_bool(0.3)));
        for _ in 0..10 {
            let (a, b) = (r.random_range(0..n), r.random_range(0..n));
            if a != b && far(a) && far(b) && !pairs.contains(&(a.min(b), a.max(b))) {
                pairs.push((a.min(b), a.max(b)));
            }
        }
        let h = Graph::from_edges(n, &pairs).map_err(|e| e.to_string())?;
        edge_edits += usize::from(h != g);
        ensure!(g.ball(v, *t).unwrap() == h.ball(v, *t).unwrap(), "test {i}: mutation touched the ball");
        let before = run_local(alg.as_ref(), &StructuredGraph::plain(g), &labels, *t).map_err(|e| e.to_string())?;
        let after = run_local(alg.as_ref(), &StructuredGraph::plain(h), &mutated, *t).map_err(|e| e.to_string())?;
        ensure!(before[v] == after[v], "test {i} ({} T={t}): output at {v} changed", alg.name());
    }
    Ok(format!("100 mutation tests, {edge_edits} with edge edits"))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, u64, fn() -> Check)> = vec![
        ("sinkless tightness", 1, c1_sinkless),
        ("double counting", 10, c2_double_counting),
        ("Markov bound on B*", 30, c3_markov),
        ("shattering solver end to end", 60, c4_shattering),
        ("oracle equivalence", 60, c5_oracle),
        ("reduction soundness", 60, c6_reduction),
        ("Schreier |F|+1 bound", 60, c7_schreier),
        ("F* expectation", 30, c8_f_star),
        ("condition stability", 10, c9_stability),
        ("locality of run_local", 10, c10_locality),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(msg) if elapsed > Duration::from_secs(limit) => Err(format!("{msg}; took {:.2}s, limit {limit}s", elapsed.as_secs_f64())),
            other => other,
        };
        match result {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} [{:.2}s/{limit}s]", i + 1, elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{:.2}s/{limit}s]", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

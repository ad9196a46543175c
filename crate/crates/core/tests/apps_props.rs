mod common;

use common::{random_constraint, rng};
use lllkit::apps::coloring::{is_proper_coloring, ColoredPart};
use lllkit::apps::schreier::SchreierAction;
use lllkit::apps::section::{estimate_f_star, exact_f_star_distribution, independent_complete_section, SectionSolver};
use lllkit::apps::{
    classify, schreier_edge_coloring, schreier_graph, section_coloring, sinkless_orientation_csp, union_coloring,
    verify_edge_coloring, SectionRoute,
};
use lllkit::apps::sinkless::default_choice;
use lllkit::bridge::{decode_graph_csp, encode_graph_csp};
use lllkit::csp::Csp;
use lllkit::exact::{int, pow, Rational};
use lllkit::graph::{cycle, disjoint_union, path, random_gnp, random_regular, Graph, VertexSet};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

/// Greedy section: scan each part's components and pick a vertex with no
/// chosen neighbor.
fn greedy_section(g: &Graph, parts: &[VertexSet]) -> Option<VertexSet> {
    let mut chosen: Vec<usize> = Vec::new();
    for p in parts {
        for comp in g.induced_components(p).unwrap() {
            if comp.iter().any(|v| chosen.contains(&v)) {
                continue;
            }
            let v = comp.iter().find(|&v| g.neighbors(v).iter().all(|u| !chosen.contains(u)))?;
            chosen.push(v);
        }
    }
    Some(VertexSet::from_unsorted(chosen))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoding_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_gnp(10, 0.3, seed);
        let q = r.random_range(1..=3);
        let mut cons = Vec::new();
        for (u, v) in g.edge_pairs() {
            for _ in 0..r.random_range(0..3) {
                let b = random_constraint(&mut r, 2, 2, q, 0.4);
                let map = |x: usize| if x == 0 { u } else { v };
                cons.push(lllkit::csp::Constraint::new(b.domain().iter().map(|&x| map(x)).collect(), b.forbidden().iter().cloned(), q).unwrap());
            }
        }
        for v in 0..10 {
            if r.random_bool(0.3) {
                cons.push(lllkit::csp::Constraint::new(vec![v], [vec![0]], q).unwrap());
            }
        }
        let csp = Csp::new(10, q, cons).unwrap();
        let enc = encode_graph_csp(&g, &csp).unwrap();
        prop_assert_eq!(decode_graph_csp(&g, &enc).unwrap(), csp.normalized());
        let sg = enc.structured(&g).unwrap();
        prop_assert_eq!(sg.sigma(), &enc.sigma);
    }

    #[test]
    fn sinkless_tightness(seed in any::<u64>(), d in 2usize..=5) {
        let n = if d % 2 == 1 { 20 } else { 19 };
        let g = random_regular(n, d, seed).unwrap();
        let csp = sinkless_orientation_csp(&g, &default_choice(&g)).unwrap();
        prop_assert_eq!(csp.d_param(), d);
        prop_assert_eq!(csp.p_param() * pow(&int(2), d as u32), int(1));
    }

    #[test]
    fn union_palette_is_sum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.random_range(3..40);
        let g = path(n);
        let mut cuts: Vec<usize> = (0..2).map(|_| r.random_range(1..n)).collect();
        cuts.sort_unstable();
        let bounds = [0, cuts[0], cuts[1], n];
        let mut parts = Vec::new();
        for w in bounds.windows(2) {
            let vs = VertexSet::from_unsorted((w[0]..w[1]).collect());
            let colors = (0..vs.len()).map(|i| (i % 2) as u32).collect();
            parts.push(ColoredPart { vertices: vs, colors, palette: 2 });
        }
        let u = union_coloring(&g, &parts).unwrap();
        prop_assert_eq!(u.palette, 6);
        for p in &parts {
            for (a, b) in g.edge_pairs() {
                if p.vertices.contains(a) && p.vertices.contains(b) {
                    prop_assert_ne!(u.colors[a], u.colors[b]);
                }
            }
        }
    }

    #[test]
    fn section_coloring_within_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_gnp(24, 0.15, seed);
        let k = r.random_range(1..4);
        let mut parts = vec![Vec::new(); k];
        for v in 0..24 {
            parts[r.random_range(0..k)].push(v);
        }
        let parts: Vec<VertexSet> = parts.into_iter().map(VertexSet::from_unsorted).collect();
        let s = greedy_section(&g, &parts);
        prop_assume!(s.is_some());
        let c = section_coloring(&g, &parts, &s.unwrap()).unwrap();
        prop_assert!(is_proper_coloring(&g, &c.colors));
        prop_assert!(c.palette <= c.bound);
    }

    #[test]
    fn schreier_bound_and_partition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = r.random_range(3..40);
        let mut shifts: Vec<Vec<i64>> = Vec::new();
        for _ in 0..r.random_range(1..4) {
            shifts.push(vec![r.random_range(1..m as i64)]);
        }
        let Ok(a) = SchreierAction::translations(&[m], &shifts) else { return Ok(()); };
        prop_assume!(a.generators.len() >= 2);
        let c = classify(&a).unwrap();
        prop_assert_eq!(c.counted_size(), c.size);
        let sg = schreier_graph(&a).unwrap();
        let mut counted = 0;
        for rep in a.representatives() {
            counted += sg.edge_class(rep).len();
        }
        prop_assert_eq!(counted, sg.graph.edge_count());
        let col = schreier_edge_coloring(&a, SectionRoute::Direct).unwrap();
        let chk = verify_edge_coloring(&sg.graph, &col.colors).unwrap();
        prop_assert!(chk.proper);
        prop_assert!(col.palette <= a.generators.len() + 1);
    }

    #[test]
    fn complete_section_contract(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sizes: Vec<usize> = (0..r.random_range(1..4)).map(|_| r.random_range(8..24)).collect();
        let g2 = disjoint_union(&sizes.iter().map(|&s| cycle(s).unwrap()).collect::<Vec<_>>());
        let n = g2.n();
        let extra: Vec<(usize, usize)> = (0..n / 8).map(|_| (r.random_range(0..n), r.random_range(0..n))).filter(|(a, b)| a != b).collect();
        let all: std::collections::BTreeSet<(usize, usize)> =
            g2.edge_pairs().into_iter().chain(extra).map(|(a, b)| (a.min(b), a.max(b))).collect();
        let g1 = Graph::from_edges(n, &all.into_iter().collect::<Vec<_>>()).unwrap();
        let rep = match independent_complete_section(&g1, &g2, 6, 3, SectionSolver::default(), seed) {
            Err(lllkit::error::Error::BudgetExceeded { .. }) => return Ok(()),
            other => other.unwrap(),
        };
        if let Some(s) = &rep.section {
            prop_assert!(g1.is_independent(s));
            for f in &rep.selected {
                prop_assert_eq!(f.iter().filter(|&v| s.contains(v)).count(), 1);
            }
            for c in g2.components() {
                prop_assert!(c.intersects(s));
            }
        } else {
            prop_assert!(rep.failure.is_some());
        }
    }
}

#[test]
fn f_star_matches_binomial_on_private_neighborhoods() {
    for (delta, k) in [(2u32, 3usize), (3, 2), (2, 5)] {
        // k centers each joined to delta private leaves.
        let n = k * (delta as usize + 1);
        let mut edges = Vec::new();
        for i in 0..k {
            for j in 0..delta as usize {
                edges.push((i, k + i * delta as usize + j));
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        let f = VertexSet::from_unsorted((0..k).collect());
        let dist = exact_f_star_distribution(&g, &f, delta, 100_000).unwrap().unwrap();
        let p = pow(&Rational::new(BigInt::from(delta - 1), BigInt::from(delta)), delta);
        let one = int(1);
        for (j, got) in dist.iter().enumerate() {
            let binom = Rational::from_integer(lllkit::exact::binomial(k as u64, j as u64));
            let want = binom * pow(&p, j as u32) * pow(&(one.clone() - p.clone()), (k - j) as u32);
            assert_eq!(got, &want, "delta {delta} k {k} j {j}");
        }
    }
}

#[test]
fn f_star_of_isolated_set_is_everything() {
    let g = Graph::empty(5);
    let f = VertexSet::from_unsorted(vec![0, 2, 4]);
    let st = estimate_f_star(&g, &f, 3, 100, 1, 100_000).unwrap();
    assert_eq!((st.min, st.max), (3, 3));
    assert_eq!(st.exact.unwrap(), vec!["0", "0", "0", "1"]);
}

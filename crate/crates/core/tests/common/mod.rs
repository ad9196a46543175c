#![allow(dead_code)]

use lllkit::csp::{for_each_assignment, Color, Constraint, Csp};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random constraint on `len` distinct variables from `0..n`, each tuple
/// forbidden with probability `density`.
pub fn random_constraint(r: &mut ChaCha8Rng, n: usize, len: usize, q: u32, density: f64) -> Constraint {
    let domain: Vec<usize> = sample(r, n, len.min(n)).into_vec();
    let mut forbidden = Vec::new();
    for_each_assignment(domain.len(), q, |t| {
        if r.random_bool(density) {
            forbidden.push(t.to_vec());
        }
    });
    Constraint::new(domain, forbidden, q).unwrap()
}

pub fn random_csp(r: &mut ChaCha8Rng, n: usize, q: u32, m: usize, max_len: usize, density: f64) -> Csp {
    let cons = (0..m)
        .map(|_| {
            let len = r.random_range(1..=max_len.min(n));
            random_constraint(r, n, len, q, density)
        })
        .collect();
    Csp::new(n, q, cons).unwrap()
}

/// Every total coloring, counted against the CSP by direct evaluation.
pub fn count_solutions(csp: &Csp) -> u64 {
    let mut count = 0;
    for_each_assignment(csp.universe(), csp.q(), |t: &[Color]| {
        let ok = csp.constraints().iter().all(|b| {
            let tuple: Vec<Color> = b.domain().iter().map(|&v| t[v]).collect();
            !b.forbidden().contains(&tuple)
        });
        if ok {
            count += 1;
        }
    });
    count
}

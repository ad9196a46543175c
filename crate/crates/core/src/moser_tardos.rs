//! Moser–Tardos resampling with least-index selection of violated constraints.

use std::collections::BTreeSet;

use rand::Rng as _;
use serde::Serialize;

use crate::csp::{Color, Csp, PartialColoring};
use crate::error::Result;
use crate::seed;

#[derive(Debug, Clone, Serialize)]
pub struct MoserTardosOutcome {
    #[serde(skip)]
    pub solution: Option<PartialColoring>,
    pub solved: bool,
    pub resamples: u64,
    /// Violated constraints left when the budget ran out.
    pub still_violated: usize,
}

pub fn moser_tardos(csp: &Csp, seed: u64, max_resamples: u64) -> Result<MoserTardosOutcome> {
    let q = csp.q();
    let mut rng = seed::rng(seed, "moser-tardos", 0);
    let mut colors: Vec<Color> = (0..csp.universe()).map(|_| rng.random_range(0..q)).collect();
    let incidence = csp.incidence();
    let cons = csp.constraints();
    let mut tuple = Vec::new();
    let mut is_violated = |i: usize, colors: &[Color]| {
        tuple.clear();
        tuple.extend(cons[i].domain().iter().map(|&v| colors[v]));
        cons[i].forbidden().contains(&tuple)
    };
    let mut violated: BTreeSet<usize> = (0..cons.len()).filter(|&i| is_violated(i, &colors)).collect();
    let mut resamples = 0u64;
    while let Some(&i) = violated.first() {
        if resamples >= max_resamples {
            break;
        }
        resamples += 1;
        for &v in cons[i].domain() {
            colors[v] = rng.random_range(0..q);
        }
        let mut touched: BTreeSet<usize> = cons[i].domain().iter().flat_map(|&v| incidence[v].iter().copied()).collect();
        touched.insert(i);
        for j in touched {
            if is_violated(j, &colors) {
                violated.insert(j);
            } else {
                violated.remove(&j);
            }
        }
    }
    let solved = violated.is_empty();
    let solution = if solved { Some(PartialColoring::from_total(q, &colors)?) } else { None };
    Ok(MoserTardosOutcome { solution, solved, resamples, still_violated: violated.len() })
}

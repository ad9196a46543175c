//! Output functions on rooted balls. Each must depend only on the isomorphism
//! type of the ball it is given.

use std::collections::BTreeSet;

use super::structured::RootedBall;

pub trait LocalAlgorithm: Send + Sync {
    fn name(&self) -> String;

    /// Smallest ball radius on which the output is meaningful.
    fn min_radius(&self) -> usize {
        0
    }

    fn evaluate(&self, ball: &RootedBall) -> u64;
}

/// Always outputs the same value.
#[derive(Debug, Clone, Copy)]
pub struct Constant(pub u64);

impl LocalAlgorithm for Constant {
    fn name(&self) -> String {
        format!("constant({})", self.0)
    }

    fn evaluate(&self, _ball: &RootedBall) -> u64 {
        self.0
    }
}

/// Outputs the root's own label.
#[derive(Debug, Clone, Copy)]
pub struct Identity;

impl LocalAlgorithm for Identity {
    fn name(&self) -> String {
        "identity".into()
    }

    fn evaluate(&self, ball: &RootedBall) -> u64 {
        ball.label(ball.root())
    }
}

/// One-round random color trial: the root's label modulo `q`.
#[derive(Debug, Clone, Copy)]
pub struct UniformColorTrial {
    pub q: u64,
}

impl LocalAlgorithm for UniformColorTrial {
    fn name(&self) -> String {
        format!("uniform-color-trial({})", self.q)
    }

    fn evaluate(&self, ball: &RootedBall) -> u64 {
        ball.label(ball.root()) % self.q
    }
}

/// Greedy coloring of the visible ball in increasing label (ID) order; the
/// root reports its color. With unique IDs and a horizon covering the whole
/// component this is a proper coloring with at most `Δ + 1` colors.
#[derive(Debug, Clone, Copy)]
pub struct GreedyById;

impl LocalAlgorithm for GreedyById {
    fn name(&self) -> String {
        "greedy-by-id".into()
    }

    fn evaluate(&self, ball: &RootedBall) -> u64 {
        let mut order: Vec<usize> = (0..ball.n()).collect();
        order.sort_by_key(|&v| (ball.label(v), ball.depth(v)));
        let mut color: Vec<Option<u64>> = vec![None; ball.n()];
        for v in order {
            let used: BTreeSet<u64> = ball.neighbors(v).iter().filter_map(|&u| color[u]).collect();
            color[v] = Some((0..).find(|c| !used.contains(c)).unwrap());
        }
        color[ball.root()].unwrap()
    }
}

pub const MIS_IN: u64 = 1;
pub const MIS_OUT: u64 = 0;
pub const MIS_UNDECIDED: u64 = 2;

/// Luby-style MIS: in each phase an active vertex joins when its label is a
/// strict maximum among its active neighbors, then joiners and their
/// neighbors retire. Each phase needs two rounds of communication.
#[derive(Debug, Clone, Copy)]
pub struct LubyMis {
    pub phases: usize,
}

impl LubyMis {
    /// Per-vertex status on the whole ball after all phases.
    pub fn statuses(&self, ball: &RootedBall) -> Vec<u64> {
        let n = ball.n();
        let mut status = vec![MIS_UNDECIDED; n];
        for _ in 0..self.phases {
            let joins: Vec<bool> = (0..n)
                .map(|v| {
                    status[v] == MIS_UNDECIDED
                        && ball
                            .neighbors(v)
                            .iter()
                            .all(|&u| status[u] != MIS_UNDECIDED || ball.label(u) < ball.label(v))
                })
                .collect();
            for v in 0..n {
                if joins[v] {
                    status[v] = MIS_IN;
                }
            }
            for v in 0..n {
                if status[v] == MIS_UNDECIDED && ball.neighbors(v).iter().any(|&u| joins[u]) {
                    status[v] = MIS_OUT;
                }
            }
        }
        status
    }
}

impl LocalAlgorithm for LubyMis {
    fn name(&self) -> String {
        format!("luby-mis({})", self.phases)
    }

    fn min_radius(&self) -> usize {
        2 * self.phases
    }

    fn evaluate(&self, ball: &RootedBall) -> u64 {
        self.statuses(ball)[ball.root()]
    }
}

/// Sinkless orientation by coin flips on the subdivided graph: edge nodes
/// output their label's parity, vertex nodes output 0.
#[derive(Debug, Clone, Copy)]
pub struct SinklessRandomTrial;

impl LocalAlgorithm for SinklessRandomTrial {
    fn name(&self) -> String {
        "sinkless-random-trial".into()
    }

    fn evaluate(&self, ball: &RootedBall) -> u64 {
        let r = ball.root();
        if ball.sigma_get(&[r]) == Some(super::problems::EDGE_NODE) {
            ball.label(r) % 2
        } else {
            0
        }
    }
}

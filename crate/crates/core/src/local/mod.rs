//! LOCAL-model simulation on structured graphs.

pub mod algorithms;
pub mod canonical;
pub mod problems;
pub mod runner;
pub mod structured;

pub use algorithms::{Constant, GreedyById, Identity, LocalAlgorithm, LubyMis, SinklessRandomTrial, UniformColorTrial};
pub use canonical::{canonical_ball, canonical_form, invariance_test, DEFAULT_CANONICAL_CAP};
pub use problems::{subdivide, LclProblem, Subdivision};
pub use runner::{check_lcl, exact_success_rate, id_sweep, run_deterministic, run_local, run_randomized, LclCheck};
pub use structured::{extract_ball, BallTemplate, RootedBall, StructuredGraph};

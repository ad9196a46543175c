//! Constructive local lemma toolkit: constraint satisfaction problems,
//! shattering-based solvers, LOCAL-model simulation and the reduction from
//! locally checkable labelings to CSPs.

pub mod apps;
pub mod bridge;
pub mod condition;
pub mod csp;
pub mod error;
pub mod exact;
pub mod graph;
pub mod io;
pub mod local;
pub mod moser_tardos;
pub mod seed;
pub mod shattering;
pub mod solver;

pub use error::{Error, Result};

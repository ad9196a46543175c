//! Combinatorial applications: coloring and sinkless-orientation CSPs,
//! independent complete sections and Schreier edge colorings.

pub mod coloring;
pub mod edge_coloring;
pub mod schreier;
pub mod section;
pub mod sinkless;

pub use coloring::{proper_coloring_csp, section_coloring, union_coloring, ColoredPart};
pub use edge_coloring::{chromatic_index, misra_gries, verify_edge_coloring, EdgeColoringCheck};
pub use schreier::{classify, schreier_edge_coloring, schreier_graph, SchreierAction, SectionRoute};
pub use section::{estimate_f_star, exact_f_star_distribution, independent_complete_section, SectionSolver};
pub use sinkless::{decode_orientation, default_choice, sinkless_orientation_csp, verify_sinkless};

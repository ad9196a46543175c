//! The LCL-to-CSP reduction, graph encodings of CSPs and the end-to-end
//! pipeline.

pub mod encoding;
pub mod pipeline;
pub mod reduction;

pub use encoding::{decode_graph_csp, encode_graph_csp, GraphCspEncoding};
pub use pipeline::{run_pipeline, PipelineOptions, PipelineReport};
pub use reduction::{lcl_to_csp, verify_reduction, ReducedConstraint, ReductionOutput, ReductionReport, VerifyOptions};

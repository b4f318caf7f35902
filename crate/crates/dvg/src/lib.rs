//! Decomposed value graphs.
//!
//! Each node is one atomic Bellman problem (avoid, reach-avoid, or a
//! reach-avoid loop component) or a pointwise combination of solved nodes.
//! Cycles only arise among loop nodes.

mod compile;
mod export;
mod graph;

pub use compile::{compile, compile_with, CompileOptions};
pub use export::{from_json, to_dot, to_json, DvgError, SCHEMA_VERSION};
pub use graph::{Dvg, DvgNode, DvgStats, NodeId, NodeKind, ValueExpr};

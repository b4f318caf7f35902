use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Dvg, DvgNode, NodeId, NodeKind};

pub const SCHEMA: &str = "tlvc-dvg";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DvgError {
    #[error("malformed DVG JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema `{schema}` version {version}")]
    Schema { schema: String, version: u32 },
    #[error("invalid DVG: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
struct Document {
    schema: String,
    version: u32,
    root: NodeId,
    topo_order: Vec<Vec<NodeId>>,
    nodes: Vec<DvgNode>,
}

pub fn to_json(dvg: &Dvg) -> String {
    let doc = Document {
        schema: SCHEMA.to_string(),
        version: SCHEMA_VERSION,
        root: dvg.root,
        topo_order: dvg.topo_order.clone(),
        nodes: dvg.nodes.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("DVG serializes")
}

pub fn from_json(text: &str) -> Result<Dvg, DvgError> {
    let doc: Document = serde_json::from_str(text)?;
    if doc.schema != SCHEMA || doc.version != SCHEMA_VERSION {
        return Err(DvgError::Schema { schema: doc.schema, version: doc.version });
    }
    let dvg = Dvg { nodes: doc.nodes, root: doc.root, topo_order: doc.topo_order };
    dvg.validate().map_err(DvgError::Invalid)?;
    Ok(dvg)
}

/// Graphviz rendering; loop hand-over edges are dashed.
pub fn to_dot(dvg: &Dvg) -> String {
    let mut s = String::from("digraph dvg {\n  rankdir=TB;\n");
    for n in &dvg.nodes {
        let shape = match n.kind {
            NodeKind::Avoid => "box",
            NodeKind::ReachAvoid => "ellipse",
            NodeKind::ReachAvoidLoop => "doublecircle",
            NodeKind::MaxCombine => "diamond",
            NodeKind::OneStep => "hexagon",
        };
        let root = if n.id == dvg.root { ", penwidth=2" } else { "" };
        let label = format!("{} {:?}\\n{}", n.id, n.kind, n.label.replace('"', "\\\""));
        s.push_str(&format!("  {} [shape={shape}, label=\"{label}\"{root}];\n", n.id));
    }
    for n in &dvg.nodes {
        for c in &n.children {
            let style = if n.loop_next == Some(*c) { " [style=dashed]" } else { "" };
            s.push_str(&format!("  {} -> {c}{style};\n", n.id));
        }
    }
    s.push_str("}\n");
    s
}

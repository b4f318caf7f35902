use std::collections::BTreeSet;
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use tlvc_rewrite::StateExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeKind {
    Avoid,
    ReachAvoid,
    ReachAvoidLoop,
    MaxCombine,
    OneStep,
}

/// Pointwise expression over state functions and solved node tables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ValueExpr {
    Const(StateExpr),
    Min(Vec<ValueExpr>),
    Max(Vec<ValueExpr>),
    ValueRef(NodeId),
    /// `max_a V(f(x, a))` of the referenced node.
    NextValueRef(NodeId),
}

impl ValueExpr {
    pub fn min(items: Vec<ValueExpr>) -> Self {
        Self::combine(items, true)
    }

    pub fn max(items: Vec<ValueExpr>) -> Self {
        Self::combine(items, false)
    }

    fn combine(items: Vec<ValueExpr>, is_min: bool) -> Self {
        let unit = if is_min { StateExpr::Top } else { StateExpr::Bottom };
        let mut out = Vec::new();
        for e in items {
            match e {
                ValueExpr::Const(ref c) if *c == unit => {}
                ValueExpr::Min(cs) if is_min => out.extend(cs),
                ValueExpr::Max(cs) if !is_min => out.extend(cs),
                e if !out.contains(&e) => out.push(e),
                _ => {}
            }
        }
        match out.len() {
            0 => ValueExpr::Const(unit),
            1 => out.pop().unwrap(),
            _ if is_min => ValueExpr::Min(out),
            _ => ValueExpr::Max(out),
        }
    }

    /// Referenced nodes in first-appearance order.
    pub fn refs(&self) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut Vec<NodeId>) {
        match self {
            ValueExpr::Const(_) => {}
            ValueExpr::ValueRef(n) | ValueExpr::NextValueRef(n) => {
                if !out.contains(n) {
                    out.push(*n);
                }
            }
            ValueExpr::Min(cs) | ValueExpr::Max(cs) => cs.iter().for_each(|c| c.collect_refs(out)),
        }
    }

    pub fn has_next_ref(&self) -> bool {
        match self {
            ValueExpr::NextValueRef(_) => true,
            ValueExpr::Min(cs) | ValueExpr::Max(cs) => cs.iter().any(ValueExpr::has_next_ref),
            _ => false,
        }
    }

    /// Top-level disjuncts (a lone non-Max expression is one disjunct).
    pub fn disjuncts(&self) -> &[ValueExpr] {
        match self {
            ValueExpr::Max(cs) => cs,
            other => std::slice::from_ref(other),
        }
    }
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, name: &str, cs: &[ValueExpr]| {
            write!(f, "{name}(")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        };
        match self {
            ValueExpr::Const(s) => write!(f, "{s}"),
            ValueExpr::Min(cs) => list(f, "min", cs),
            ValueExpr::Max(cs) => list(f, "max", cs),
            ValueExpr::ValueRef(n) => write!(f, "V[{n}]"),
            ValueExpr::NextValueRef(n) => write!(f, "V+[{n}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DvgNode {
    pub id: NodeId,
    pub kind: NodeKind,
    /// Avoid set (Avoid / ReachAvoid / ReachAvoidLoop); `Top` otherwise.
    pub avoid: StateExpr,
    /// Reach value (ReachAvoid / ReachAvoidLoop) or the combined expression
    /// (MaxCombine / OneStep); absent for Avoid.
    pub reach: Option<ValueExpr>,
    pub loop_next: Option<NodeId>,
    pub children: Vec<NodeId>,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dvg {
    pub nodes: Vec<DvgNode>,
    pub root: NodeId,
    /// Strongly connected components, dependencies first.
    pub topo_order: Vec<Vec<NodeId>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DvgStats {
    pub nodes: usize,
    pub edges: usize,
    pub sccs: usize,
    pub avoid: usize,
    pub reach_avoid: usize,
    pub reach_avoid_loop: usize,
    pub max_combine: usize,
    pub one_step: usize,
    pub largest_loop: usize,
}

impl DvgStats {
    /// Nodes that carry a reach-avoid Bellman equation.
    pub fn value_nodes(&self) -> usize {
        self.reach_avoid + self.reach_avoid_loop
    }
}

impl Dvg {
    pub fn node(&self, id: NodeId) -> &DvgNode {
        &self.nodes[id.0]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes.iter().flat_map(|n| n.children.iter().map(move |&c| (n.id, c)))
    }

    pub fn stats(&self) -> DvgStats {
        let mut s = DvgStats { nodes: self.nodes.len(), edges: self.edges().count(), sccs: self.topo_order.len(), ..Default::default() };
        for n in &self.nodes {
            match n.kind {
                NodeKind::Avoid => s.avoid += 1,
                NodeKind::ReachAvoid => s.reach_avoid += 1,
                NodeKind::ReachAvoidLoop => s.reach_avoid_loop += 1,
                NodeKind::MaxCombine => s.max_combine += 1,
                NodeKind::OneStep => s.one_step += 1,
            }
        }
        s.largest_loop = self
            .topo_order
            .iter()
            .filter(|c| self.node(c[0]).kind == NodeKind::ReachAvoidLoop)
            .map(Vec::len)
            .max()
            .unwrap_or(0);
        s
    }

    /// SCCs of the dependency graph, children before parents, ids ascending
    /// inside each component.
    pub fn components(nodes: &[DvgNode]) -> Vec<Vec<NodeId>> {
        let mut g = DiGraph::<(), ()>::with_capacity(nodes.len(), 0);
        let idx: Vec<_> = nodes.iter().map(|_| g.add_node(())).collect();
        for n in nodes {
            for c in &n.children {
                g.add_edge(idx[n.id.0], idx[c.0], ());
            }
        }
        tarjan_scc(&g)
            .into_iter()
            .map(|comp| {
                let mut ids: Vec<NodeId> = comp.into_iter().map(|i| NodeId(i.index())).collect();
                ids.sort();
                ids
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), String> {
        let n = self.nodes.len();
        if self.root.0 >= n {
            return Err(format!("root {} does not exist", self.root));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            if node.id.0 != i {
                return Err(format!("node at position {i} has id {}", node.id));
            }
            let refs = node.reach.as_ref().map(ValueExpr::refs).unwrap_or_default();
            if let Some(bad) = refs.iter().chain(&node.children).chain(&node.loop_next).find(|r| r.0 >= n) {
                return Err(format!("{} references missing node {bad}", node.id));
            }
            let want: BTreeSet<_> = refs.iter().collect();
            let have: BTreeSet<_> = node.children.iter().collect();
            if want != have {
                return Err(format!("{} children do not match its reach references", node.id));
            }
            let is_loop = node.kind == NodeKind::ReachAvoidLoop;
            if is_loop != node.loop_next.is_some() {
                return Err(format!("{} loop_next does not match its kind", node.id));
            }
            match (node.kind, &node.reach) {
                (NodeKind::Avoid, None) => {}
                (NodeKind::Avoid, Some(_)) | (_, None) => return Err(format!("{} reach does not match its kind", node.id)),
                (NodeKind::ReachAvoidLoop | NodeKind::OneStep, Some(_)) => {}
                (_, Some(r)) if r.has_next_ref() => return Err(format!("{} uses a next-step reference", node.id)),
                _ => {}
            }
        }
        let comps = Self::components(&self.nodes);
        for c in &comps {
            let cyclic = c.len() > 1 || self.node(c[0]).children.contains(&c[0]);
            if cyclic && c.iter().any(|&i| self.node(i).kind != NodeKind::ReachAvoidLoop) {
                return Err(format!("cycle through non-loop node in {c:?}"));
            }
        }
        let mut pos = vec![usize::MAX; n];
        for (k, comp) in self.topo_order.iter().enumerate() {
            for id in comp {
                if id.0 >= n || pos[id.0] != usize::MAX {
                    return Err("topo_order is not a partition of the nodes".into());
                }
                pos[id.0] = k;
            }
        }
        if pos.contains(&usize::MAX) {
            return Err("topo_order misses nodes".into());
        }
        for (a, b) in self.edges() {
            if pos[b.0] > pos[a.0] {
                return Err(format!("{a} is ordered before its dependency {b}"));
            }
            if pos[a.0] == pos[b.0] && self.node(a).kind != NodeKind::ReachAvoidLoop {
                return Err(format!("{a} shares a component with its dependency {b}"));
            }
        }
        Ok(())
    }
}

use std::collections::HashMap;

use tlvc_rewrite::{Body, NormalForm, NormalizedSpec, StateExpr};

use crate::graph::{Dvg, DvgNode, NodeId, NodeKind, ValueExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    /// Hash-cons structurally identical nodes.
    pub dedup: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions { dedup: true }
    }
}

pub fn compile(spec: &NormalizedSpec) -> Dvg {
    compile_with(spec, CompileOptions::default())
}

/// Builds the value graph of a normalized spec.
///
/// One node per distinct normal form: a reach-avoid node while plain untils
/// are pending (its reach is the best completion `r_i ∧ V[rest]`), a cycle
/// of loop nodes for the G-part, an avoid node for a bare safety term.
/// Disjunctions and first-state constraints combine pointwise; `X` becomes a
/// one-step node.
pub fn compile_with(spec: &NormalizedSpec, opts: CompileOptions) -> Dvg {
    let mut c = Compiler { opts, nodes: Vec::new(), forms: HashMap::new(), cons: HashMap::new() };
    let root = c.spec_node(spec);
    let topo_order = Dvg::components(&c.nodes);
    let dvg = Dvg { nodes: c.nodes, root, topo_order };
    debug_assert_eq!(dvg.validate(), Ok(()));
    dvg
}

type ConsKey = (NodeKind, StateExpr, Option<ValueExpr>, Option<NodeId>);

struct Compiler {
    opts: CompileOptions,
    nodes: Vec<DvgNode>,
    forms: HashMap<NormalForm, NodeId>,
    cons: HashMap<ConsKey, NodeId>,
}

impl Compiler {
    fn push(&mut self, kind: NodeKind, avoid: StateExpr, reach: Option<ValueExpr>, loop_next: Option<NodeId>, label: String) -> NodeId {
        let key = (kind, avoid.clone(), reach.clone(), loop_next);
        if self.opts.dedup {
            if let Some(&id) = self.cons.get(&key) {
                return id;
            }
        }
        let id = NodeId(self.nodes.len());
        let children = reach.as_ref().map(ValueExpr::refs).unwrap_or_default();
        self.nodes.push(DvgNode { id, kind, avoid, reach, loop_next, children, label });
        self.cons.insert(key, id);
        id
    }

    /// `max_k min(now_k, V[body_k])`.
    fn spec_expr(&mut self, spec: &NormalizedSpec) -> ValueExpr {
        let parts = spec
            .disjuncts
            .iter()
            .map(|c| {
                let now = ValueExpr::Const(c.now.clone());
                match &c.body {
                    Body::Trivial => now,
                    body => {
                        let id = self.body_node(body);
                        ValueExpr::min(vec![now, ValueExpr::ValueRef(id)])
                    }
                }
            })
            .collect();
        ValueExpr::max(parts)
    }

    fn spec_node(&mut self, spec: &NormalizedSpec) -> NodeId {
        if let [c] = spec.disjuncts.as_slice() {
            if c.now.is_top() && c.body != Body::Trivial {
                return self.body_node(&c.body);
            }
        }
        let reach = self.spec_expr(spec);
        self.push(NodeKind::MaxCombine, StateExpr::Top, Some(reach), None, spec.to_string())
    }

    fn body_node(&mut self, body: &Body) -> NodeId {
        match body {
            Body::Trivial => unreachable!("trivial bodies have no node"),
            Body::Form(f) => self.form_node(f),
            Body::Next(s) => {
                let child = self.spec_node(s);
                self.push(NodeKind::OneStep, StateExpr::Top, Some(ValueExpr::NextValueRef(child)), None, format!("(X {s})"))
            }
        }
    }

    fn form_node(&mut self, f: &NormalForm) -> NodeId {
        let key = f.key();
        if let Some(&id) = self.forms.get(&key) {
            return id;
        }
        let id = if !f.untils.is_empty() {
            let reach = (0..f.untils.len())
                .map(|i| {
                    let done = f.completion(i).expect("normalize admits every completion");
                    self.spec_expr(&done)
                })
                .collect();
            self.push(NodeKind::ReachAvoid, f.guard(), Some(ValueExpr::max(reach)), None, f.to_string())
        } else if !f.loops.is_empty() {
            self.loop_cycle(f)
        } else {
            self.push(NodeKind::Avoid, f.safety.clone(), None, None, f.to_string())
        };
        self.forms.insert(key, id);
        id
    }

    /// Loop `j` waits (under the G invariant) for `r_j` and then hands over
    /// to loop `j + 1`; the last wraps around to the first.
    fn loop_cycle(&mut self, f: &NormalForm) -> NodeId {
        let inv = f.invariant();
        let first = self.nodes.len();
        let count = f.loops.len();
        for (j, l) in f.loops.iter().enumerate() {
            let id = NodeId(first + j);
            let next = NodeId(first + (j + 1) % count);
            let reach = ValueExpr::min(vec![
                ValueExpr::Const(StateExpr::min([l.reach.clone(), inv.clone()])),
                ValueExpr::NextValueRef(next),
            ]);
            self.nodes.push(DvgNode {
                id,
                kind: NodeKind::ReachAvoidLoop,
                avoid: inv.clone(),
                children: reach.refs(),
                reach: Some(reach),
                loop_next: Some(next),
                label: format!("loop {}/{count} of {f}", j + 1),
            });
        }
        NodeId(first)
    }
}

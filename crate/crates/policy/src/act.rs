use thiserror::Error;
use tlvc_dvg::{Dvg, NodeId, NodeKind, ValueExpr};
use tlvc_logic::{LogicError, Registry};
use tlvc_mdp::Mdp;
use tlvc_solver::{loop_parts, Real, SolveError, Solution};

#[derive(Debug, Error)]
pub enum PolicyError {
    #[error("node {0} has no solved table")]
    Unsolved(NodeId),
    #[error("state {0} is out of range")]
    BadState(usize),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Environment state plus controller memory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AugState {
    pub env_state: usize,
    pub active: NodeId,
    /// Position within the active loop component.
    pub loop_phase: usize,
    /// The spec has been discharged; nothing is tracked any more.
    pub done: bool,
}

impl AugState {
    pub fn start(x0: usize, dvg: &Dvg) -> Self {
        AugState { env_state: x0, active: dvg.root, loop_phase: 0, done: false }
    }
}

/// A hand-over from one node to another (`None`: the spec is discharged).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Switch {
    pub from: NodeId,
    pub to: Option<NodeId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolicyStep<T> {
    pub action: usize,
    pub next_active: NodeId,
    pub next_phase: usize,
    pub done: bool,
    /// Whether the active node's trigger fired (`switch_value ≥ stay_value`).
    pub trigger_fired: bool,
    pub stay_value: T,
    pub switch_value: T,
    /// Every hand-over taken this step, in order.
    pub switches: Vec<Switch>,
}

struct Ctx<'a, T> {
    sol: &'a Solution<T>,
    mdp: &'a Mdp,
    reg: &'a Registry<T>,
}

impl<T: Real> Ctx<'_, T> {
    fn table(&self, id: NodeId) -> Result<&[T], PolicyError> {
        self.sol
            .tables
            .get(id.0)
            .map(Vec::as_slice)
            .filter(|t| t.len() == self.mdp.state_count())
            .ok_or(PolicyError::Unsolved(id))
    }

    /// `max_a V(f(x, a))` and its lowest-index argmax.
    fn greedy(&self, id: NodeId, x: usize) -> Result<(usize, T), PolicyError> {
        let v = self.table(id)?;
        let a = self.mdp.argmax_action(x, v);
        Ok((a, v[self.mdp.step(x, a)]))
    }

    fn eval(&self, e: &ValueExpr, x: usize) -> Result<T, PolicyError> {
        Ok(match e {
            ValueExpr::Const(s) => s.eval(self.reg, x)?,
            ValueExpr::ValueRef(id) => self.table(*id)?[x],
            ValueExpr::NextValueRef(id) => self.greedy(*id, x)?.1,
            ValueExpr::Min(cs) => cs.iter().try_fold(T::infinity(), |m, c| Ok::<_, PolicyError>(m.min(self.eval(c, x)?)))?,
            ValueExpr::Max(cs) => cs.iter().try_fold(T::neg_infinity(), |m, c| Ok::<_, PolicyError>(m.max(self.eval(c, x)?)))?,
        })
    }

    /// Best disjunct of a reach expression: value, index and the node it
    /// hands over to (none if it is a pure state condition).
    fn best_disjunct(&self, e: &ValueExpr, x: usize) -> Result<(T, Option<NodeId>), PolicyError> {
        let mut best: Option<(T, Option<NodeId>)> = None;
        for d in e.disjuncts() {
            let v = self.eval(d, x)?;
            if best.map_or(true, |(b, _)| v > b) {
                best = Some((v, d.refs().first().copied()));
            }
        }
        Ok(best.unwrap_or((T::neg_infinity(), None)))
    }
}

/// One decision of the augmented policy.
pub fn act<T: Real>(s: &AugState, sol: &Solution<T>, dvg: &Dvg, mdp: &Mdp, reg: &Registry<T>) -> Result<PolicyStep<T>, PolicyError> {
    let x = s.env_state;
    if x >= mdp.state_count() {
        return Err(PolicyError::BadState(x));
    }
    let ctx = Ctx { sol, mdp, reg };
    if s.done {
        return Ok(PolicyStep {
            action: 0,
            next_active: s.active,
            next_phase: 0,
            done: true,
            trigger_fired: false,
            stay_value: T::neg_infinity(),
            switch_value: T::neg_infinity(),
            switches: vec![],
        });
    }
    let mut switches = Vec::new();
    let mut first: Option<(bool, T, T)> = None;
    let (mut node, mut phase) = (s.active, s.loop_phase);
    loop {
        let n = dvg.node(node);
        let (stay_action, stay) = match n.kind {
            NodeKind::MaxCombine | NodeKind::OneStep => (0, T::neg_infinity()),
            _ => ctx.greedy(node, x)?,
        };
        // (switch value, target, whether the target starts at the next state)
        let (switch, target, deferred) = match n.kind {
            NodeKind::Avoid => (T::neg_infinity(), None, false),
            NodeKind::ReachAvoid | NodeKind::MaxCombine => {
                let reach = n.reach.as_ref().ok_or(PolicyError::Unsolved(node))?;
                let (v, t) = ctx.best_disjunct(reach, x)?;
                (v, t, false)
            }
            NodeKind::ReachAvoidLoop => {
                let (r, next) = loop_parts(n)?;
                (r.eval(reg, x)?.min(ctx.greedy(next, x)?.1), Some(next), true)
            }
            NodeKind::OneStep => {
                let reach = n.reach.as_ref().ok_or(PolicyError::Unsolved(node))?;
                (ctx.eval(reach, x)?, reach.refs().first().copied(), true)
            }
        };
        let fired = n.kind != NodeKind::Avoid && switch >= stay;
        first.get_or_insert((fired, stay, switch));
        let step = |action, next_active, next_phase, done, switches| {
            let (trigger_fired, stay_value, switch_value) = first.unwrap();
            PolicyStep { action, next_active, next_phase, done, trigger_fired, stay_value, switch_value, switches }
        };
        if !fired {
            return Ok(step(stay_action, node, phase, false, switches));
        }
        switches.push(Switch { from: node, to: target });
        match target {
            None => return Ok(step(0, node, 0, true, switches)),
            Some(t) if deferred => {
                let (a, _) = ctx.greedy(t, x)?;
                let next_phase = if n.kind == NodeKind::ReachAvoidLoop { phase + 1 } else { 0 };
                let len = component_len(dvg, t);
                return Ok(step(a, t, next_phase % len.max(1), false, switches));
            }
            Some(t) => {
                node = t;
                phase = 0;
            }
        }
    }
}

fn component_len(dvg: &Dvg, id: NodeId) -> usize {
    dvg.topo_order.iter().find(|c| c.contains(&id)).map_or(1, Vec::len)
}

use std::fmt::Write as _;

use tlvc_dvg::{Dvg, NodeId};
use tlvc_logic::{robustness, Predicate, Registry, Trace};
use tlvc_mdp::{rollout, Mdp};
use tlvc_solver::{Real, Solution};

use crate::{act, AugState, PolicyError, Switch};

/// One closed-loop decision.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub t: usize,
    pub state: usize,
    pub active: NodeId,
    pub done: bool,
    pub action: usize,
    pub trigger: bool,
    pub switches: Vec<Switch>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scored<T> {
    pub trace: Trace,
    pub robustness: T,
    pub rows: Vec<Row>,
}

type Memory = (NodeId, usize, bool);

fn run<T: Real>(
    x0: usize,
    sol: &Solution<T>,
    dvg: &Dvg,
    mdp: &Mdp,
    reg: &Registry<T>,
    horizon: usize,
) -> Result<(Trace, Vec<Row>), PolicyError> {
    if x0 >= mdp.state_count() {
        return Err(PolicyError::BadState(x0));
    }
    let mut failure = None;
    let mut rows = Vec::new();
    let start: Memory = (dvg.root, 0, false);
    let out = rollout(mdp, x0, start, horizon, |x, &(active, loop_phase, done)| {
        let s = AugState { env_state: x, active, loop_phase, done };
        match act(&s, sol, dvg, mdp, reg) {
            Ok(step) => {
                rows.push(Row {
                    t: rows.len(),
                    state: x,
                    active,
                    done,
                    action: step.action,
                    trigger: step.trigger_fired,
                    switches: step.switches,
                });
                (step.action, (step.next_active, step.next_phase, step.done))
            }
            Err(e) => {
                failure.get_or_insert(e);
                (0, (active, loop_phase, done))
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    rows.truncate(out.steps.len());
    Ok((out.trace, rows))
}

/// Closed-loop rollout from `(x0, root)` scored against the original spec.
pub fn score_rollout<T: Real>(
    x0: usize,
    sol: &Solution<T>,
    dvg: &Dvg,
    mdp: &Mdp,
    reg: &Registry<T>,
    spec: &Predicate,
    horizon: usize,
) -> Result<Scored<T>, PolicyError> {
    let (trace, rows) = run(x0, sol, dvg, mdp, reg, horizon)?;
    let robustness = robustness(spec, &trace, 0, reg)?;
    Ok(Scored { trace, robustness, rows })
}

/// Precomputed trigger schedule of a closed-loop run.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonTree {
    /// `(time, hand-over)` in the order taken.
    pub events: Vec<(usize, Switch)>,
    /// States visited, one more than the number of decisions.
    pub states: Vec<usize>,
    /// Decision index at which the run starts repeating, if it closed a lasso.
    pub cycle_start: Option<usize>,
}

impl ComparisonTree {
    pub fn decisions(&self) -> usize {
        self.states.len() - 1
    }

    /// Events inside the repeating part, with times relative to its start.
    pub fn periodic_events(&self) -> Vec<(usize, Switch)> {
        match self.cycle_start {
            Some(k) => self.events.iter().filter(|(t, _)| *t >= k).map(|&(t, s)| (t - k, s)).collect(),
            None => vec![],
        }
    }

    pub fn period(&self) -> Option<usize> {
        self.cycle_start.map(|k| self.decisions() - k)
    }
}

pub fn build_comparison_tree<T: Real>(
    x0: usize,
    sol: &Solution<T>,
    dvg: &Dvg,
    mdp: &Mdp,
    reg: &Registry<T>,
    horizon: usize,
) -> Result<ComparisonTree, PolicyError> {
    let (trace, rows) = run(x0, sol, dvg, mdp, reg, horizon)?;
    let events = rows.iter().flat_map(|r| r.switches.iter().map(move |&s| (r.t, s))).collect();
    let mut states: Vec<usize> = rows.iter().map(|r| r.state).collect();
    let cycle_start = match &trace {
        Trace::Lasso { prefix, cycle } => {
            states.push(cycle[0]);
            Some(prefix.len())
        }
        Trace::Finite(s) => {
            states.push(*s.last().expect("non-empty"));
            None
        }
    };
    Ok(ComparisonTree { events, states, cycle_start })
}

/// Open-loop replay: follow the recorded hand-overs and act greedily on
/// whichever node is active, without re-evaluating any trigger.
pub fn replay<T: Real>(tree: &ComparisonTree, x0: usize, sol: &Solution<T>, dvg: &Dvg, mdp: &Mdp) -> Result<Vec<usize>, PolicyError> {
    let mut states = vec![x0];
    let (mut x, mut active, mut done) = (x0, dvg.root, false);
    let mut events = tree.events.iter().peekable();
    for t in 0..tree.decisions() {
        while let Some(&&(_, s)) = events.peek().filter(|(et, _)| *et == t) {
            events.next();
            match s.to {
                Some(n) => active = n,
                None => done = true,
            }
        }
        let a = if done {
            0
        } else {
            let v = sol.tables.get(active.0).ok_or(PolicyError::Unsolved(active))?;
            mdp.argmax_action(x, v)
        };
        x = mdp.step(x, a);
        states.push(x);
    }
    Ok(states)
}

/// `t,state,row,col,active,action,trigger`; row/col are blank off-grid.
pub fn rollout_csv(rows: &[Row], mdp: &Mdp) -> String {
    let mut out = String::from("t,state,row,col,active,action,trigger\n");
    for r in rows {
        let (row, col) = match mdp.coords() {
            Some(c) => (c[r.state].0.to_string(), c[r.state].1.to_string()),
            None => (String::new(), String::new()),
        };
        let active = if r.done { "done".to_string() } else { r.active.to_string() };
        let _ = writeln!(out, "{},{},{row},{col},{active},{},{}", r.t, r.state, r.action, u8::from(r.trigger));
    }
    out
}

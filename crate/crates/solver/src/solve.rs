use log::{debug, info};
use thiserror::Error;
use tlvc_dvg::{Dvg, DvgNode, NodeId, NodeKind, ValueExpr};
use tlvc_logic::{LogicError, Registry};
use tlvc_mdp::Mdp;
use tlvc_rewrite::StateExpr;

use crate::backup::{backup_avoid, backup_reach_avoid, backup_reach_avoid_loop, sup_dist};
use crate::Real;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("registry has {registry} states but the MDP has {mdp}")]
    StateMismatch { registry: usize, mdp: usize },
    #[error("node {node} depends on unsolved node {missing}")]
    Unresolved { node: NodeId, missing: NodeId },
    #[error("node {node} is malformed: {reason}")]
    Malformed { node: NodeId, reason: String },
    #[error("node {node} did not converge at gamma {gamma} after {iterations} iterations (last change {residual:e})")]
    NoConvergence { node: NodeId, gamma: f64, iterations: usize, residual: f64 },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    /// Ascending discounts in (0, 1).
    pub gamma_schedule: Vec<f64>,
    /// Sup-norm change below which iteration stops.
    pub tol: f64,
    /// Per-gamma iteration cap; `None` picks one from the contraction rate.
    pub max_iters: Option<usize>,
    pub warm_start: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self { gamma_schedule: vec![0.9, 0.99, 0.999], tol: 1e-9, max_iters: None, warm_start: true }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        if self.gamma_schedule.is_empty() {
            return Err(SolveError::Config("empty gamma schedule".into()));
        }
        if let Some(g) = self.gamma_schedule.iter().find(|g| !(**g > 0.0 && **g < 1.0)) {
            return Err(SolveError::Config(format!("gamma {g} outside (0, 1)")));
        }
        if self.gamma_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SolveError::Config("gamma schedule must be strictly ascending".into()));
        }
        if !(self.tol > 0.0) {
            return Err(SolveError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    /// Iteration cap for one leg. Besides `100 · states`, the automatic cap
    /// covers the `γ^k · 2B < tol` contraction bound, which dominates as
    /// `γ → 1` on small state spaces.
    pub fn iteration_cap(&self, gamma: f64, states: usize, bound: f64) -> usize {
        self.max_iters.unwrap_or_else(|| {
            let contraction = ((self.tol / (2.0 * bound.max(self.tol))).ln() / gamma.ln()).ceil() as usize + 10;
            (100 * states).max(contraction)
        })
    }
}

/// Value tables for every node at one discount.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<T> {
    pub gamma: f64,
    pub tables: Vec<Vec<T>>,
    pub iterations: Vec<usize>,
    /// `‖B[V] − V‖∞` of each node's final table (0 for combination nodes).
    pub residuals: Vec<f64>,
}

impl<T: Real> Solution<T> {
    pub fn table(&self, id: NodeId) -> &[T] {
        &self.tables[id.0]
    }

    pub fn value(&self, id: NodeId, x: usize) -> T {
        self.tables[id.0][x]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Pointwise evaluation of a reach expression against already solved tables.
pub fn eval_value_expr<T: Real>(
    e: &ValueExpr,
    tables: &[Option<Vec<T>>],
    reg: &Registry<T>,
    mdp: &Mdp,
) -> Result<Vec<T>, SolveError> {
    let lookup = |id: NodeId| tables.get(id.0).and_then(Option::as_ref).ok_or(id);
    let missing = |id| SolveError::Unresolved { node: id, missing: id };
    Ok(match e {
        ValueExpr::Const(s) => s.table(reg)?,
        ValueExpr::ValueRef(id) => lookup(*id).map_err(missing)?.clone(),
        ValueExpr::NextValueRef(id) => mdp.best_successor(lookup(*id).map_err(missing)?),
        ValueExpr::Min(items) | ValueExpr::Max(items) => {
            let is_min = matches!(e, ValueExpr::Min(_));
            let mut acc: Option<Vec<T>> = None;
            for item in items {
                let t = eval_value_expr(item, tables, reg, mdp)?;
                acc = Some(match acc {
                    None => t,
                    Some(a) => a.iter().zip(&t).map(|(&x, &y)| if is_min { x.min(y) } else { x.max(y) }).collect(),
                });
            }
            match acc {
                Some(a) => a,
                None => vec![if is_min { reg.top() } else { reg.bottom() }; reg.state_count()],
            }
        }
    })
}

/// Splits a loop node's reach `min(r̃, V⁺_next)` into `r̃` and `next`.
pub fn loop_parts(node: &DvgNode) -> Result<(StateExpr, NodeId), SolveError> {
    let bad = |reason: &str| SolveError::Malformed { node: node.id, reason: reason.into() };
    let next = node.loop_next.ok_or_else(|| bad("loop node without successor"))?;
    let reach = node.reach.as_ref().ok_or_else(|| bad("loop node without reach"))?;
    let parts = match reach {
        ValueExpr::Min(items) => items.as_slice(),
        other => std::slice::from_ref(other),
    };
    let mut consts = Vec::new();
    let mut saw_next = false;
    for p in parts {
        match p {
            ValueExpr::Const(s) => consts.push(s.clone()),
            ValueExpr::NextValueRef(n) if *n == next => saw_next = true,
            _ => return Err(bad("loop reach must be min(state, V+[next])")),
        }
    }
    if !saw_next {
        return Err(bad("loop reach does not hand over to its successor"));
    }
    Ok((StateExpr::min(consts), next))
}

/// Solves along the whole schedule and returns the final-gamma tables.
pub fn solve<T: Real>(dvg: &Dvg, mdp: &Mdp, reg: &Registry<T>, cfg: &SolveConfig) -> Result<Solution<T>, SolveError> {
    Ok(solve_schedule(dvg, mdp, reg, cfg)?.pop().expect("validated schedule is non-empty"))
}

/// One solution per gamma of the schedule.
pub fn solve_schedule<T: Real>(
    dvg: &Dvg,
    mdp: &Mdp,
    reg: &Registry<T>,
    cfg: &SolveConfig,
) -> Result<Vec<Solution<T>>, SolveError> {
    cfg.validate()?;
    let mut legs: Vec<Solution<T>> = Vec::with_capacity(cfg.gamma_schedule.len());
    for &gamma in &cfg.gamma_schedule {
        let warm = if cfg.warm_start { legs.last() } else { None };
        let sol = solve_at(dvg, mdp, reg, gamma, cfg, warm)?;
        info!(
            "gamma {gamma}: {} sweeps, max residual {:e}",
            sol.iterations.iter().sum::<usize>(),
            sol.max_residual()
        );
        legs.push(sol);
    }
    Ok(legs)
}

/// Solves every node at a single discount.
pub fn solve_at<T: Real>(
    dvg: &Dvg,
    mdp: &Mdp,
    reg: &Registry<T>,
    gamma: f64,
    cfg: &SolveConfig,
    warm: Option<&Solution<T>>,
) -> Result<Solution<T>, SolveError> {
    let n = mdp.state_count();
    if reg.state_count() != n {
        return Err(SolveError::StateMismatch { registry: reg.state_count(), mdp: n });
    }
    let warm = warm.filter(|w| w.tables.len() == dvg.len() && w.tables.iter().all(|t| t.len() == n));
    let g = T::from_f64(gamma).ok_or_else(|| SolveError::Config(format!("gamma {gamma} not representable")))?;
    let tol = cfg.tol;
    let cap = cfg.iteration_cap(gamma, n, reg.bound().to_f64().unwrap_or(1.0));

    let mut tables: Vec<Option<Vec<T>>> = vec![None; dvg.len()];
    let mut iterations = vec![0; dvg.len()];
    let mut residuals = vec![0.0; dvg.len()];
    let dist = |a: &[T], b: &[T]| sup_dist(a, b).to_f64().unwrap_or(f64::INFINITY);

    for comp in &dvg.topo_order {
        let first = dvg.node(comp[0]);
        match first.kind {
            NodeKind::ReachAvoidLoop => {
                let parts = comp.iter().map(|&id| loop_parts(dvg.node(id))).collect::<Result<Vec<_>, _>>()?;
                let local = |id: NodeId| comp.iter().position(|&c| c == id);
                let mut r = Vec::with_capacity(comp.len());
                let mut q = Vec::with_capacity(comp.len());
                let mut next = Vec::with_capacity(comp.len());
                for (&id, (rt, nx)) in comp.iter().zip(&parts) {
                    r.push(rt.table(reg)?);
                    q.push(dvg.node(id).avoid.table(reg)?);
                    next.push(local(*nx).ok_or_else(|| SolveError::Malformed {
                        node: id,
                        reason: format!("successor {nx} lies outside its component"),
                    })?);
                }
                // Cycle order: follow loop_next from the first member.
                let mut order = vec![0];
                while order.len() < comp.len() {
                    let j = next[*order.last().unwrap()];
                    if order.contains(&j) {
                        return Err(SolveError::Malformed { node: comp[j], reason: "loop successors do not form one cycle".into() });
                    }
                    order.push(j);
                }
                if next[*order.last().unwrap()] != 0 {
                    return Err(SolveError::Malformed { node: comp[0], reason: "loop successors do not close the cycle".into() });
                }
                let step = |vs: &[Vec<T>]| -> Vec<Vec<T>> {
                    (0..order.len())
                        .map(|k| backup_reach_avoid_loop(vs, k, &r[order[k]], &q[order[k]], mdp, g))
                        .collect()
                };
                let mut vs: Vec<Vec<T>> = order
                    .iter()
                    .map(|&j| match warm {
                        Some(w) => w.tables[comp[j].0].clone(),
                        None => r[j].iter().zip(&q[j]).map(|(&a, &b)| a.min(b)).collect(),
                    })
                    .collect();
                let (mut it, mut change) = (0, f64::INFINITY);
                while change >= tol {
                    if it == cap {
                        return Err(SolveError::NoConvergence { node: comp[0], gamma, iterations: it, residual: change });
                    }
                    let new = step(&vs);
                    change = vs.iter().zip(&new).map(|(a, b)| dist(a, b)).fold(0.0, f64::max);
                    vs = new;
                    it += 1;
                }
                let check = step(&vs);
                for (k, v) in vs.into_iter().enumerate() {
                    let id = comp[order[k]];
                    residuals[id.0] = dist(&check[k], &v);
                    iterations[id.0] = it;
                    tables[id.0] = Some(v);
                }
                debug!("loop {:?}: {it} sweeps", comp);
            }
            _ if comp.len() > 1 => {
                return Err(SolveError::Malformed { node: first.id, reason: "cycle through a non-loop node".into() });
            }
            NodeKind::Avoid | NodeKind::ReachAvoid => {
                let q = first.avoid.table(reg)?;
                let r = match &first.reach {
                    Some(e) => Some(eval_value_expr(e, &tables, reg, mdp)?),
                    None => None,
                };
                let step = |v: &[T]| match &r {
                    Some(r) => backup_reach_avoid(v, r, &q, mdp, g),
                    None => backup_avoid(v, &q, mdp, g),
                };
                let mut v = match (warm, &r) {
                    (Some(w), _) => w.tables[first.id.0].clone(),
                    (None, Some(r)) => r.iter().zip(&q).map(|(&a, &b)| a.min(b)).collect(),
                    (None, None) => q.clone(),
                };
                let (mut it, mut change) = (0, f64::INFINITY);
                while change >= tol {
                    if it == cap {
                        return Err(SolveError::NoConvergence { node: first.id, gamma, iterations: it, residual: change });
                    }
                    let new = step(&v);
                    change = dist(&v, &new);
                    v = new;
                    it += 1;
                }
                residuals[first.id.0] = dist(&step(&v), &v);
                iterations[first.id.0] = it;
                debug!("{} ({:?}): {it} sweeps", first.id, first.kind);
                tables[first.id.0] = Some(v);
            }
            NodeKind::MaxCombine | NodeKind::OneStep => {
                let e = first.reach.as_ref().ok_or_else(|| SolveError::Malformed {
                    node: first.id,
                    reason: "combination node without expression".into(),
                })?;
                let v = eval_value_expr(e, &tables, reg, mdp).map_err(|err| match err {
                    SolveError::Unresolved { missing, .. } => SolveError::Unresolved { node: first.id, missing },
                    other => other,
                })?;
                tables[first.id.0] = Some(v);
            }
        }
    }
    let tables = tables
        .into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or(SolveError::Unresolved { node: dvg.root, missing: NodeId(i) }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Solution { gamma, tables, iterations, residuals })
}

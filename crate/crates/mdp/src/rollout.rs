use std::collections::HashMap;
use std::hash::Hash;

use rand::Rng;
use tlvc_logic::Trace;

use crate::Mdp;

#[derive(Clone, Debug, PartialEq)]
pub struct Step<M> {
    pub state: usize,
    pub memory: M,
    pub action: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rollout<M> {
    pub trace: Trace,
    /// One entry per decision taken, in order.
    pub steps: Vec<Step<M>>,
}

/// Runs a deterministic policy with memory from `x0`.
///
/// The policy maps `(state, memory)` to an action and the next memory. As
/// soon as a `(state, memory)` pair repeats the run is periodic, and the
/// result is a lasso; otherwise it is a finite trace of `horizon + 1` states.
pub fn rollout<M, P>(mdp: &Mdp, x0: usize, m0: M, horizon: usize, mut policy: P) -> Rollout<M>
where
    M: Clone + Eq + Hash,
    P: FnMut(usize, &M) -> (usize, M),
{
    let mut seen: HashMap<(usize, M), usize> = HashMap::new();
    let mut states = vec![x0];
    let mut steps = Vec::new();
    let (mut x, mut m) = (x0, m0);
    for t in 0..=horizon {
        if let Some(&k) = seen.get(&(x, m.clone())) {
            states.pop();
            let cycle = states.split_off(k);
            steps.truncate(t);
            return Rollout { trace: Trace::lasso(states, cycle).expect("cycle is non-empty"), steps };
        }
        seen.insert((x, m.clone()), t);
        if t == horizon {
            break;
        }
        let (a, next) = policy(x, &m);
        steps.push(Step { state: x, memory: m, action: a });
        x = mdp.step(x, a);
        m = next;
        states.push(x);
    }
    Rollout { trace: Trace::finite(states).expect("non-empty"), steps }
}

/// Memoryless rollout.
pub fn rollout_memoryless(mdp: &Mdp, x0: usize, horizon: usize, mut policy: impl FnMut(usize) -> usize) -> Trace {
    rollout(mdp, x0, (), horizon, |x, _| (policy(x), ())).trace
}

/// Lasso produced by a random finite-memory policy with `memory` modes from a
/// random start. The product of states and modes is finite, so the run
/// always closes a cycle.
pub fn random_lasso(mdp: &Mdp, memory: usize, rng: &mut impl Rng) -> Trace {
    let n = mdp.state_count() * memory;
    let table: Vec<(usize, usize)> =
        (0..n).map(|_| (rng.gen_range(0..mdp.action_count()), rng.gen_range(0..memory))).collect();
    let x0 = rng.gen_range(0..mdp.state_count());
    let m0 = rng.gen_range(0..memory);
    rollout(mdp, x0, m0, n, |x, &m| table[x * memory + m]).trace
}

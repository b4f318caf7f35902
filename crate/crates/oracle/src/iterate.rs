use tlvc_logic::{Registry, Scalar};
use tlvc_mdp::Mdp;
use tlvc_rewrite::StateExpr;

use crate::sweep::check_states;
use crate::OracleError;

/// Result of a recurrence iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct Iteration<T> {
    /// Stabilized table of every component, in the order given.
    pub values: Vec<Vec<T>>,
    /// `V_0, V_1, …, V_k` of the first component.
    pub history: Vec<Vec<T>>,
    /// First `k` with `V_{k+1} = V_k`.
    pub rounds: usize,
}

impl<T> Iteration<T> {
    pub fn root(&self) -> &[T] {
        &self.values[0]
    }
}

/// Undiscounted `V*[q U ρ]`: best over paths of the reach payoff, clipped by
/// the running minimum of `q` (inclusive of the reaching step).
pub fn reach_value<T: Scalar>(avoid: &[T], reach: &[T], mdp: &Mdp) -> Vec<T> {
    let mut v: Vec<T> = reach.iter().zip(avoid).map(|(&r, &q)| r.meet(q)).collect();
    loop {
        let best = mdp.best_successor(&v);
        let next: Vec<T> = (0..v.len()).map(|x| v[x].join(best[x].meet(avoid[x]))).collect();
        if next == v {
            return v;
        }
        v = next;
    }
}

/// `V_{k+1} = V*[F(r ∧ X V_k)]` from `V_0 ≡ +B`, until it stabilizes.
pub fn gf_iteration<T: Scalar>(r: &StateExpr, mdp: &Mdp, reg: &Registry<T>, k_max: usize) -> Result<Iteration<T>, OracleError> {
    loop_iteration(&[(StateExpr::Top, r.clone())], mdp, reg, k_max)
}

/// Coupled iteration for `G(⋀_j q_j U r_j)`:
/// `V_{j,k+1} = V*[q̃ U (r̃_j ∧ X V_{j+1,k})]` with `q̃ = ⋀ q_j`,
/// `r̃_j = r_j ∧ q̃` and `J + 1 := 1`, from `V_{j,0} ≡ +B`.
pub fn loop_iteration<T: Scalar>(
    pairs: &[(StateExpr, StateExpr)],
    mdp: &Mdp,
    reg: &Registry<T>,
    k_max: usize,
) -> Result<Iteration<T>, OracleError> {
    check_states(mdp, reg)?;
    let n = mdp.state_count();
    let guard = StateExpr::min(pairs.iter().map(|(q, _)| q.clone()));
    let q = guard.table(reg)?;
    let r = pairs
        .iter()
        .map(|(_, r)| StateExpr::min([r.clone(), guard.clone()]).table(reg))
        .collect::<Result<Vec<_>, _>>()?;
    let j = pairs.len();
    let mut v = vec![vec![reg.top(); n]; j];
    let mut history = vec![v[0].clone()];
    for k in 0..k_max {
        let next: Vec<Vec<T>> = (0..j)
            .map(|i| {
                let handover = mdp.best_successor(&v[(i + 1) % j]);
                let reach: Vec<T> = r[i].iter().zip(&handover).map(|(&a, &b)| a.meet(b)).collect();
                reach_value(&q, &reach, mdp)
            })
            .collect();
        if next == v {
            return Ok(Iteration { values: v, history, rounds: k });
        }
        v = next;
        history.push(v[0].clone());
    }
    Err(OracleError::NotStabilized(k_max))
}

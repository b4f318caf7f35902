//! The three discounted Bellman operators. Each maps an input table to a
//! fresh output table; `V⁺(x) = max_a V(f(x, a))`.

use rayon::prelude::*;
use tlvc_mdp::Mdp;

use crate::Real;

const PAR_THRESHOLD: usize = 4096;

pub(crate) fn map_states<T: Real>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    if n >= PAR_THRESHOLD {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

#[inline]
fn best<T: Real>(mdp: &Mdp, v: &[T], x: usize) -> T {
    mdp.successors(x).iter().fold(T::neg_infinity(), |m, &y| m.max(v[y]))
}

/// `(1-γ) q + γ min(V⁺, q)`.
pub fn backup_avoid<T: Real>(v: &[T], q: &[T], mdp: &Mdp, gamma: T) -> Vec<T> {
    let one = T::one();
    map_states(mdp.state_count(), |x| (one - gamma) * q[x] + gamma * best(mdp, v, x).min(q[x]))
}

/// `(1-γ) min(r, q) + γ min(max(V⁺, r), q)`.
pub fn backup_reach_avoid<T: Real>(v: &[T], r: &[T], q: &[T], mdp: &Mdp, gamma: T) -> Vec<T> {
    let one = T::one();
    map_states(mdp.state_count(), |x| {
        (one - gamma) * r[x].min(q[x]) + gamma * best(mdp, v, x).max(r[x]).min(q[x])
    })
}

/// Loop component `j` of a cycle (`j + 1` wraps to 0):
/// `(1-γ) min(r̃_j, q̃_j) + γ min(max(min(r̃_j, V⁺_{j+1}), V⁺_j), q̃_j)`.
pub fn backup_reach_avoid_loop<T: Real>(vs: &[Vec<T>], j: usize, r: &[T], q: &[T], mdp: &Mdp, gamma: T) -> Vec<T> {
    let one = T::one();
    let (own, next) = (&vs[j], &vs[(j + 1) % vs.len()]);
    map_states(mdp.state_count(), |x| {
        let handover = r[x].min(best(mdp, next, x));
        (one - gamma) * r[x].min(q[x]) + gamma * handover.max(best(mdp, own, x)).min(q[x])
    })
}

pub fn sup_dist<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()))
}

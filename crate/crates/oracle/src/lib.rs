//! Ground-truth optimal values on finite deterministic MDPs.
//!
//! Every value of an in-fragment spec is a lattice combination of atom
//! values, so it lies on a finite ladder. At each rung `λ` the atoms are
//! binarized (`a(x) ≥ λ`) and the spec becomes a classical game solved by
//! attractors and nested fixpoints; `V*(x)` is the highest rung `x` wins.
//! The recurrence iterations are the finite-horizon characterizations of
//! `GF r` and `G(⋀ q_j U r_j)`, useful as a second opinion.

mod iterate;
mod sweep;

pub use iterate::{gf_iteration, loop_iteration, reach_value, Iteration};
pub use sweep::{ladder, oracle_value, winning_set, WinningSet};

pub type Iteration64 = Iteration<f64>;
pub type IterationQ = Iteration<tlvc_logic::Rational>;

use thiserror::Error;
use tlvc_logic::LogicError;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("registry has {registry} states but the MDP has {mdp}")]
    StateMismatch { registry: usize, mdp: usize },
    #[error("iteration did not stabilize within {0} rounds")]
    NotStabilized(usize),
    #[error("conjunction leaves the supported fragment")]
    Unsupported,
    #[error(transparent)]
    Logic(#[from] LogicError),
}

//! Discounted value iteration over a decomposed value graph.
//!
//! Components are solved children-first. Avoid and reach-avoid nodes iterate
//! their own operator; loop components iterate jointly (Jacobi sweeps);
//! combination nodes are evaluated pointwise. The discount is annealed
//! along `gamma_schedule`, each leg warm-started from the previous one.

mod backup;
mod export;
mod solve;

pub use backup::{backup_avoid, backup_reach_avoid, backup_reach_avoid_loop, sup_dist};
pub use export::{from_blob, to_blob, to_csv, BLOB_MAGIC, BLOB_VERSION};
pub use solve::{eval_value_expr, loop_parts, solve, solve_at, solve_schedule, SolveConfig, SolveError, Solution};

use num_traits::{Float, FromPrimitive};
use tlvc_logic::Scalar;

/// Floating-point value type the solver runs on.
pub trait Real: Scalar + Float + FromPrimitive {}

impl<T: Scalar + Float + FromPrimitive> Real for T {}

pub type Solution64 = Solution<f64>;
pub type Solution32 = Solution<f32>;

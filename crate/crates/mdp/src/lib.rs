//! Finite deterministic MDPs and grid worlds.

mod grid;
pub mod instances;
mod mdp;
mod rollout;

pub use grid::{build_grid, heatmap_csv, GridSpec, Rect, ACTION_NAMES};
pub use mdp::{Mdp, MdpError};
pub use rollout::{random_lasso, rollout, rollout_memoryless, Rollout, Step};

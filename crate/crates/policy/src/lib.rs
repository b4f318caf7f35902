//! Greedy policies with memory, read off a solved value graph.
//!
//! The controller tracks which node is active. Each step it compares the
//! value of staying with the node against handing over to a child (the
//! trigger); a fired trigger moves control and takes the child's greedy
//! action. Ties go to switching and to the lowest index.

mod act;
mod schedule;

pub use act::{act, AugState, PolicyError, PolicyStep, Switch};
pub use schedule::{build_comparison_tree, replay, rollout_csv, score_rollout, ComparisonTree, Row, Scored};

pub type Scored64 = Scored<f64>;
pub type Scored32 = Scored<f32>;

//! Normal forms for decomposable temporal-logic specifications.
//!
//! A [`NormalizedSpec`] is a max over conjuncts; each conjunct is a state
//! constraint on the first state plus one temporal body: a [`NormalForm`]
//! (plain untils, loop untils under G, and a safety term) or a one-step
//! `X` of another spec.

mod check;
pub mod lemmas;
mod normal;
mod normalize;
mod state_expr;

pub use check::{check_equivalence, EquivalenceReport, Mismatch};
pub use normal::{Body, Conjunct, LoopUntil, NormalForm, NormalizedSpec, Reach, Unsupported, Until};
pub use normalize::{normalize, FragmentError, FragmentReason};
pub use state_expr::StateExpr;

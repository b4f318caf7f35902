//! Temporal-logic predicates and their robustness scores.
//!
//! Scores are computed exactly on lasso traces (`prefix · cycle^ω`); finite
//! traces use truncated semantics. The evaluator works over any [`Lattice`],
//! so the same code scores `f64` tables, exact rationals, or 64 packed
//! two-valued valuations at once ([`Bits`]).

mod error;
mod eval;
mod predicate;
mod registry;
mod scalar;
mod trace;

pub use error::LogicError;
pub use eval::{robustness, satisfies, Formula};
pub use predicate::{atom, structural_eq, Predicate};
pub use registry::{AtomEntry, AtomId, Registry};
pub use scalar::{clip, Bits, Lattice, Scalar};
pub use trace::{Layout, Trace};

pub use num_rational::Ratio;

/// Exact rational scores.
pub type Rational = Ratio<i64>;

pub type Registry64 = Registry<f64>;
pub type Registry32 = Registry<f32>;
pub type RegistryQ = Registry<Rational>;
/// Bit-sliced two-valued registry (64 valuations per word).
pub type RegistryBits = Registry<Bits>;

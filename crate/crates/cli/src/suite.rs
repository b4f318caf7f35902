//! Seeded random grid instances for suite-level checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tlvc_mdp::GridSpec;

/// Spec shapes drawn over three regions `r0`, `r1`, `r2`.
pub const TEMPLATES: &[&str] = &[
    "F r0",
    "G !r0",
    "!r1 U r0",
    "F G r0",
    "G F r0",
    "F r0 & F r1",
    "F r0 & F r1 & F r2",
    "F r0 & G !r1",
    "F r0 & F r1 & G !r2",
    "(!r2 U r0) & (!r2 U r1)",
    "G(F r0 & F r1)",
    "G F r0 & G !r1",
    "G(F r0 & F r1) & G !r2",
];

#[derive(Clone, Debug)]
pub struct Instance {
    pub index: usize,
    pub grid: GridSpec,
    pub spec: &'static str,
}

/// Instance `k` of the suite for `seed`: a grid of at most 8×8 with three
/// regions and light walls, and a template chosen round-robin.
pub fn instance(seed: u64, k: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let rows = rng.gen_range(2..=8);
    let cols = rng.gen_range(2..=8);
    let grid = GridSpec::random(rows, cols, 3, 0.15, &mut rng);
    Instance { index: k, grid, spec: TEMPLATES[k % TEMPLATES.len()] }
}

use rand::Rng;
use tlvc_logic::{Formula, Lattice, LogicError, Predicate, Registry, Trace};
use tlvc_mdp::{random_lasso, Mdp};

use crate::NormalizedSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch<T> {
    pub trace: Trace,
    pub original: T,
    pub normalized: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport<T> {
    pub samples: usize,
    pub mismatches: usize,
    pub first: Option<Mismatch<T>>,
}

impl<T> EquivalenceReport<T> {
    pub fn ok(&self) -> bool {
        self.mismatches == 0
    }
}

/// Compares the robustness of `p` and of the predicate read back from `n`
/// at time 0 on `samples` random lasso traces of `mdp`.
pub fn check_equivalence<T: Lattice>(
    p: &Predicate,
    n: &NormalizedSpec,
    samples: usize,
    mdp: &Mdp,
    reg: &Registry<T>,
    rng: &mut impl Rng,
) -> Result<EquivalenceReport<T>, LogicError> {
    let lhs = Formula::bind(p, reg)?;
    let rhs = Formula::bind(&n.as_predicate(), reg)?;
    let mut report = EquivalenceReport { samples, mismatches: 0, first: None };
    for _ in 0..samples {
        let memory = rng.gen_range(1..4);
        let trace = random_lasso(mdp, memory, rng);
        let layout = trace.layout()?;
        let (a, b) = (lhs.eval(&layout, reg)?[0], rhs.eval(&layout, reg)?[0]);
        if a != b {
            report.mismatches += 1;
            if report.first.is_none() {
                report.first = Some(Mismatch { trace: trace.clone(), original: a, normalized: b });
            }
        }
    }
    Ok(report)
}

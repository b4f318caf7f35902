use std::collections::HashMap;

use rayon::prelude::*;
use tlvc_logic::{Registry, Scalar};
use tlvc_mdp::Mdp;
use tlvc_rewrite::{Body, NormalForm, NormalizedSpec, Reach, StateExpr};

use crate::OracleError;

/// States winning the binarized game at threshold `lambda`.
#[derive(Clone, Debug, PartialEq)]
pub struct WinningSet<T> {
    pub lambda: T,
    pub states: Vec<bool>,
}

/// Sorted distinct values of every atom and negated atom of the spec, plus
/// `±B`.
pub fn ladder<T: Scalar>(spec: &NormalizedSpec, reg: &Registry<T>) -> Result<Vec<T>, OracleError> {
    let mut names = Vec::new();
    collect_atoms(spec, &mut names);
    let mut out = vec![reg.top(), reg.bottom()];
    for name in names {
        let id = reg.resolve(&name)?;
        for &v in reg.table(id) {
            out.push(v);
            out.push(v.negate());
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("ordered scalar"));
    out.dedup();
    Ok(out)
}

fn collect_atoms(spec: &NormalizedSpec, out: &mut Vec<String>) {
    for c in &spec.disjuncts {
        c.now.atoms(out);
        match &c.body {
            Body::Trivial => {}
            Body::Next(n) => collect_atoms(n, out),
            Body::Form(f) => {
                f.safety.atoms(out);
                for u in &f.untils {
                    u.avoid.atoms(out);
                    match &u.reach {
                        Reach::State(s) => s.atoms(out),
                        Reach::Nested(n) => collect_atoms(n, out),
                    }
                }
                for l in &f.loops {
                    l.avoid.atoms(out);
                    l.reach.atoms(out);
                }
            }
        }
    }
}

/// Exact optimal value of every state.
pub fn oracle_value<T: Scalar>(spec: &NormalizedSpec, mdp: &Mdp, reg: &Registry<T>) -> Result<Vec<T>, OracleError> {
    check_states(mdp, reg)?;
    let rungs = ladder(spec, reg)?;
    let sets = rungs
        .par_iter()
        .map(|&l| winning_set(spec, mdp, reg, l))
        .collect::<Result<Vec<_>, _>>()?;
    let mut value = vec![reg.bottom(); mdp.state_count()];
    for set in &sets {
        for (x, &w) in set.states.iter().enumerate() {
            if w && set.lambda > value[x] {
                value[x] = set.lambda;
            }
        }
    }
    Ok(value)
}

pub(crate) fn check_states<T: Scalar>(mdp: &Mdp, reg: &Registry<T>) -> Result<(), OracleError> {
    if reg.state_count() != mdp.state_count() {
        return Err(OracleError::StateMismatch { registry: reg.state_count(), mdp: mdp.state_count() });
    }
    Ok(())
}

pub fn winning_set<T: Scalar>(
    spec: &NormalizedSpec,
    mdp: &Mdp,
    reg: &Registry<T>,
    lambda: T,
) -> Result<WinningSet<T>, OracleError> {
    check_states(mdp, reg)?;
    let mut game = Game { mdp, reg, lambda, memo: HashMap::new() };
    Ok(WinningSet { lambda, states: game.spec(spec)? })
}

type Set = Vec<bool>;

struct Game<'a, T> {
    mdp: &'a Mdp,
    reg: &'a Registry<T>,
    lambda: T,
    memo: HashMap<NormalizedSpec, Set>,
}

impl<T: Scalar> Game<'_, T> {
    fn n(&self) -> usize {
        self.mdp.state_count()
    }

    fn holds(&self, e: &StateExpr) -> Result<Set, OracleError> {
        (0..self.n()).map(|x| Ok(e.eval(self.reg, x)? >= self.lambda)).collect()
    }

    /// States with some successor in `z`.
    fn ex(&self, z: &[bool]) -> Set {
        (0..self.n()).map(|x| self.mdp.successors(x).iter().any(|&y| z[y])).collect()
    }

    /// Least fixpoint of `Y = target ∪ (guard ∩ EX Y)`.
    fn attractor(&self, target: &[bool], guard: &[bool]) -> Set {
        let mut y = target.to_vec();
        loop {
            let pre = self.ex(&y);
            let next: Set = (0..self.n()).map(|x| y[x] || (guard[x] && pre[x])).collect();
            if next == y {
                return y;
            }
            y = next;
        }
    }

    /// Greatest fixpoint of `Z = guard ∩ EX Z` (viability kernel).
    fn kernel(&self, guard: &[bool]) -> Set {
        let mut z = guard.to_vec();
        loop {
            let pre = self.ex(&z);
            let next: Set = (0..self.n()).map(|x| z[x] && pre[x]).collect();
            if next == z {
                return z;
            }
            z = next;
        }
    }

    /// `νZ. ⋂_j μY. (guard ∩ R_j ∩ EX Z) ∪ (guard ∩ EX Y)`: stay in `guard`
    /// forever while visiting every `R_j` infinitely often.
    fn buchi(&self, guard: &[bool], goals: &[Set]) -> Set {
        let mut z = guard.to_vec();
        loop {
            let pre = self.ex(&z);
            let mut next = z.clone();
            for r in goals {
                let target: Set = (0..self.n()).map(|x| guard[x] && r[x] && pre[x]).collect();
                let reach = self.attractor(&target, guard);
                next.iter_mut().zip(reach).for_each(|(a, b)| *a &= b);
            }
            if next == z {
                return z;
            }
            z = next;
        }
    }

    fn spec(&mut self, spec: &NormalizedSpec) -> Result<Set, OracleError> {
        if let Some(hit) = self.memo.get(spec) {
            return Ok(hit.clone());
        }
        let mut out = vec![false; self.n()];
        for c in &spec.disjuncts {
            let now = self.holds(&c.now)?;
            let body = match &c.body {
                Body::Trivial => vec![true; self.n()],
                Body::Next(inner) => {
                    let w = self.spec(inner)?;
                    self.ex(&w)
                }
                Body::Form(f) => self.form(f)?,
            };
            for x in 0..self.n() {
                out[x] |= now[x] && body[x];
            }
        }
        self.memo.insert(spec.clone(), out.clone());
        Ok(out)
    }

    fn form(&mut self, f: &NormalForm) -> Result<Set, OracleError> {
        let n = self.n();
        let safety = self.holds(&f.safety)?;
        let loop_avoid = f.loops.iter().map(|l| self.holds(&l.avoid)).collect::<Result<Vec<_>, _>>()?;
        let invariant: Set = (0..n).map(|x| safety[x] && loop_avoid.iter().all(|q| q[x])).collect();

        // Tail: only the G-part remains.
        let tail = if f.loops.is_empty() {
            self.kernel(&invariant)
        } else {
            let goals = f.loops.iter().map(|l| self.holds(&l.reach)).collect::<Result<Vec<_>, _>>()?;
            self.buchi(&invariant, &goals)
        };

        // Pending-subset product: win[P] for every set P of open untils,
        // built up from the empty set.
        let k = f.untils.len();
        let avoid = f.untils.iter().map(|u| self.holds(&u.avoid)).collect::<Result<Vec<_>, _>>()?;
        let mut win: Vec<Set> = vec![tail];
        for mask in 1usize..(1 << k) {
            let guard: Set = (0..n)
                .map(|x| invariant[x] && (0..k).all(|i| mask & (1 << i) == 0 || avoid[i][x]))
                .collect();
            let mut done = vec![false; n];
            for i in (0..k).filter(|i| mask & (1 << i) != 0) {
                let rest = mask & !(1 << i);
                let completes = match &f.untils[i].reach {
                    Reach::State(s) => {
                        let r = self.holds(s)?;
                        (0..n).map(|x| r[x] && win[rest][x]).collect::<Set>()
                    }
                    Reach::Nested(inner) => {
                        let sub = NormalForm {
                            untils: (0..k).filter(|j| rest & (1 << j) != 0).map(|j| f.untils[j].clone()).collect(),
                            ..f.clone()
                        };
                        let both = inner.and(&NormalizedSpec::form(sub)).map_err(|_| OracleError::Unsupported)?;
                        self.spec(&both)?
                    }
                };
                done.iter_mut().zip(completes).for_each(|(a, b)| *a |= b);
            }
            let target: Set = (0..n).map(|x| guard[x] && done[x]).collect();
            win.push(self.attractor(&target, &guard));
        }
        Ok(win.pop().expect("at least the tail"))
    }
}

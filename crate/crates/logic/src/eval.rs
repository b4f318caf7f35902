//! Exact robustness over lasso-shaped traces.
//!
//! Each subformula is evaluated at every position of the layout. On the cycle
//! the set of reachable positions is the whole cycle, so F/G reduce to a
//! suffix scan plus one extremum over the cycle, and U needs at most one lap
//! of scanning before its running minimum stops changing.

use crate::registry::{AtomId, Registry};
use crate::scalar::{Lattice, Scalar};
use crate::trace::{Layout, Trace};
use crate::{LogicError, Predicate};

#[derive(Clone, Debug)]
enum Op {
    Atom(AtomId),
    Top,
    Bottom,
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Next(usize),
    Finally(usize),
    Globally(usize),
    Until(usize, usize),
}

/// A predicate with atoms resolved, flattened in post-order.
#[derive(Clone, Debug)]
pub struct Formula {
    ops: Vec<Op>,
}

impl Formula {
    pub fn bind<T: Lattice>(p: &Predicate, reg: &Registry<T>) -> Result<Self, LogicError> {
        let mut ops = Vec::with_capacity(p.size());
        push(p, reg, &mut ops)?;
        Ok(Formula { ops })
    }

    /// Root values at every position of `layout`.
    pub fn eval<T: Lattice>(&self, layout: &Layout<'_>, reg: &Registry<T>) -> Result<Vec<T>, LogicError> {
        let n = layout.len();
        if n == 0 {
            return Err(LogicError::EmptyTrace);
        }
        if let Some(&s) = layout.states.iter().find(|&&s| s >= reg.state_count()) {
            return Err(LogicError::BadState { state: s, count: reg.state_count() });
        }
        let p = layout.loop_start;
        let mut vals: Vec<Vec<T>> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match op {
                Op::Atom(id) => layout.states.iter().map(|&s| reg.value(*id, s)).collect(),
                Op::Top => vec![reg.top(); n],
                Op::Bottom => vec![reg.bottom(); n],
                Op::Not(c) => vals[*c].iter().map(|x| x.negate()).collect(),
                Op::And(cs) => fold(&vals, cs, T::meet),
                Op::Or(cs) => fold(&vals, cs, T::join),
                Op::Next(c) => (0..n).map(|i| vals[*c][layout.succ(i)]).collect(),
                Op::Finally(c) => sweep(&vals[*c], p, T::join),
                Op::Globally(c) => sweep(&vals[*c], p, T::meet),
                Op::Until(a, b) => until(&vals[*a], &vals[*b], p),
            };
            vals.push(v);
        }
        Ok(vals.pop().unwrap())
    }
}

fn push<T: Lattice>(p: &Predicate, reg: &Registry<T>, ops: &mut Vec<Op>) -> Result<usize, LogicError> {
    let op = match p {
        Predicate::Atom(name) => Op::Atom(reg.resolve(name)?),
        Predicate::True => Op::Top,
        Predicate::False => Op::Bottom,
        Predicate::Not(c) => Op::Not(push(c, reg, ops)?),
        Predicate::Next(c) => Op::Next(push(c, reg, ops)?),
        Predicate::Finally(c) => Op::Finally(push(c, reg, ops)?),
        Predicate::Globally(c) => Op::Globally(push(c, reg, ops)?),
        Predicate::Until(a, b) => {
            let a = push(a, reg, ops)?;
            Op::Until(a, push(b, reg, ops)?)
        }
        Predicate::And(cs) => Op::And(cs.iter().map(|c| push(c, reg, ops)).collect::<Result<_, _>>()?),
        Predicate::Or(cs) => Op::Or(cs.iter().map(|c| push(c, reg, ops)).collect::<Result<_, _>>()?),
    };
    ops.push(op);
    Ok(ops.len() - 1)
}

fn fold<T: Lattice>(vals: &[Vec<T>], cs: &[usize], f: fn(T, T) -> T) -> Vec<T> {
    let mut out = vals[cs[0]].clone();
    for &c in &cs[1..] {
        for (o, &x) in out.iter_mut().zip(&vals[c]) {
            *o = f(*o, x);
        }
    }
    out
}

/// F (with join) or G (with meet): every cycle position sees the whole cycle.
fn sweep<T: Lattice>(v: &[T], p: usize, f: fn(T, T) -> T) -> Vec<T> {
    let n = v.len();
    let cyc = v[p..].iter().copied().reduce(f).unwrap();
    let mut out = vec![cyc; n];
    for i in (0..p).rev() {
        out[i] = f(v[i], out[i + 1]);
    }
    out
}

/// Inclusive until: max over τ ≥ i of min(b(τ), min over [i, τ] of a).
fn until<T: Lattice>(a: &[T], b: &[T], p: usize) -> Vec<T> {
    let n = a.len();
    let c = n - p;
    let mut out = a.to_vec();
    for i in p..n {
        let mut run = a[i];
        let mut best = run.meet(b[i]);
        for k in 1..c {
            let j = p + (i - p + k) % c;
            run = run.meet(a[j]);
            best = best.join(run.meet(b[j]));
        }
        out[i] = best;
    }
    for i in (0..p).rev() {
        out[i] = a[i].meet(b[i].join(out[i + 1]));
    }
    out
}

/// Robustness of `p` on `trace` at time `t`.
pub fn robustness<T: Lattice>(p: &Predicate, trace: &Trace, t: usize, reg: &Registry<T>) -> Result<T, LogicError> {
    let pos = trace.position(t)?;
    let f = Formula::bind(p, reg)?;
    Ok(f.eval(&trace.layout()?, reg)?[pos])
}

/// Satisfaction is robustness at or above zero.
pub fn satisfies<T: Scalar>(p: &Predicate, trace: &Trace, t: usize, reg: &Registry<T>) -> Result<bool, LogicError> {
    Ok(robustness(p, trace, t, reg)? >= T::zero())
}

use std::fmt;

use serde::{Deserialize, Serialize};
use tlvc_logic::{Lattice, LogicError, Predicate, Registry};

/// A boolean combination of atoms, evaluated at a single state.
///
/// `Top`/`Bottom` are the constants `+B`/`-B`. Build through [`min`](Self::min)
/// and [`max`](Self::max) to keep the canonical shape: flattened, sorted,
/// deduplicated, constants absorbed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StateExpr {
    Top,
    Bottom,
    Atom(String),
    NegAtom(String),
    Min(Vec<StateExpr>),
    Max(Vec<StateExpr>),
}

impl StateExpr {
    pub fn atom(name: &str) -> Self {
        StateExpr::Atom(name.to_string())
    }

    pub fn min(items: impl IntoIterator<Item = StateExpr>) -> Self {
        Self::combine(items, true)
    }

    pub fn max(items: impl IntoIterator<Item = StateExpr>) -> Self {
        Self::combine(items, false)
    }

    fn combine(items: impl IntoIterator<Item = StateExpr>, is_min: bool) -> Self {
        let (unit, zero) = if is_min { (StateExpr::Top, StateExpr::Bottom) } else { (StateExpr::Bottom, StateExpr::Top) };
        let mut out = Vec::new();
        for e in items {
            match e {
                e if e == unit => {}
                e if e == zero => return zero,
                StateExpr::Min(cs) if is_min => out.extend(cs),
                StateExpr::Max(cs) if !is_min => out.extend(cs),
                e => out.push(e),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => unit,
            1 => out.pop().unwrap(),
            _ if is_min => StateExpr::Min(out),
            _ => StateExpr::Max(out),
        }
    }

    pub fn negate(&self) -> Self {
        match self {
            StateExpr::Top => StateExpr::Bottom,
            StateExpr::Bottom => StateExpr::Top,
            StateExpr::Atom(a) => StateExpr::NegAtom(a.clone()),
            StateExpr::NegAtom(a) => StateExpr::Atom(a.clone()),
            StateExpr::Min(cs) => StateExpr::max(cs.iter().map(StateExpr::negate)),
            StateExpr::Max(cs) => StateExpr::min(cs.iter().map(StateExpr::negate)),
        }
    }

    pub fn is_top(&self) -> bool {
        *self == StateExpr::Top
    }

    /// Converts a temporal-free predicate; `None` if it has temporal operators.
    pub fn from_predicate(p: &Predicate) -> Option<Self> {
        Some(match p {
            Predicate::Atom(a) => StateExpr::Atom(a.clone()),
            Predicate::True => StateExpr::Top,
            Predicate::False => StateExpr::Bottom,
            Predicate::Not(c) => Self::from_predicate(c)?.negate(),
            Predicate::And(cs) => StateExpr::min(cs.iter().map(Self::from_predicate).collect::<Option<Vec<_>>>()?),
            Predicate::Or(cs) => StateExpr::max(cs.iter().map(Self::from_predicate).collect::<Option<Vec<_>>>()?),
            _ => return None,
        })
    }

    pub fn to_predicate(&self) -> Predicate {
        match self {
            StateExpr::Top => Predicate::True,
            StateExpr::Bottom => Predicate::False,
            StateExpr::Atom(a) => Predicate::Atom(a.clone()),
            StateExpr::NegAtom(a) => Predicate::not(Predicate::Atom(a.clone())),
            StateExpr::Min(cs) => Predicate::and(cs.iter().map(StateExpr::to_predicate).collect()),
            StateExpr::Max(cs) => Predicate::or(cs.iter().map(StateExpr::to_predicate).collect()),
        }
    }

    pub fn eval<T: Lattice>(&self, reg: &Registry<T>, x: usize) -> Result<T, LogicError> {
        Ok(match self {
            StateExpr::Top => reg.top(),
            StateExpr::Bottom => reg.bottom(),
            StateExpr::Atom(a) => reg.value(reg.resolve(a)?, x),
            StateExpr::NegAtom(a) => reg.value(reg.resolve(a)?, x).negate(),
            StateExpr::Min(cs) => {
                let mut acc = reg.top();
                for c in cs {
                    acc = acc.meet(c.eval(reg, x)?);
                }
                acc
            }
            StateExpr::Max(cs) => {
                let mut acc = reg.bottom();
                for c in cs {
                    acc = acc.join(c.eval(reg, x)?);
                }
                acc
            }
        })
    }

    /// Values at every state of the registry.
    pub fn table<T: Lattice>(&self, reg: &Registry<T>) -> Result<Vec<T>, LogicError> {
        (0..reg.state_count()).map(|x| self.eval(reg, x)).collect()
    }

    pub fn atoms(&self, out: &mut Vec<String>) {
        match self {
            StateExpr::Atom(a) | StateExpr::NegAtom(a) => out.push(a.clone()),
            StateExpr::Min(cs) | StateExpr::Max(cs) => cs.iter().for_each(|c| c.atoms(out)),
            _ => {}
        }
    }
}

impl fmt::Display for StateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_predicate())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_combination() {
        let (a, b) = (StateExpr::atom("a"), StateExpr::atom("b"));
        assert_eq!(StateExpr::min([b.clone(), StateExpr::Top, a.clone(), a.clone()]), StateExpr::Min(vec![a.clone(), b.clone()]));
        assert_eq!(StateExpr::min([a.clone(), StateExpr::Bottom]), StateExpr::Bottom);
        assert_eq!(StateExpr::max(Vec::new()), StateExpr::Bottom);
        assert_eq!(StateExpr::min([StateExpr::min([a.clone(), b.clone()]), a.clone()]), StateExpr::min([a.clone(), b.clone()]));
        assert_eq!(StateExpr::min([a.clone(), b.clone()]).negate(), StateExpr::max([a.negate(), b.negate()]));
    }

    #[test]
    fn evaluation() {
        let reg = Registry::new(2, 1.0).with("a", vec![0.5, -0.25]).unwrap().with("b", vec![0.0, 1.0]).unwrap();
        let e = StateExpr::max([StateExpr::atom("a").negate(), StateExpr::atom("b")]);
        assert_eq!(e.table(&reg).unwrap(), vec![0.0, 1.0]);
        assert_eq!(StateExpr::Bottom.eval(&reg, 0).unwrap(), -1.0);
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};
use tlvc_logic::Predicate;

use crate::StateExpr;

/// Disjunction of conjuncts; its value is the max over them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalizedSpec {
    pub disjuncts: Vec<Conjunct>,
}

/// `now ∧ body`, where `now` is a state constraint on the first state only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Conjunct {
    pub now: StateExpr,
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Body {
    Trivial,
    Form(NormalForm),
    Next(Box<NormalizedSpec>),
}

/// `⋀ (avoid_i U reach_i) ∧ G(⋀ (q_j U r_j) ∧ safety)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalForm {
    pub untils: Vec<Until>,
    pub loops: Vec<LoopUntil>,
    pub safety: StateExpr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Until {
    pub avoid: StateExpr,
    pub reach: Reach,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reach {
    State(StateExpr),
    Nested(Box<NormalizedSpec>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LoopUntil {
    pub avoid: StateExpr,
    pub reach: StateExpr,
}

/// Two obligations whose conjunction leaves the decomposable class
/// (a pending `X` next to other temporal obligations).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unsupported;

impl NormalizedSpec {
    pub fn state(e: StateExpr) -> Self {
        NormalizedSpec { disjuncts: vec![Conjunct { now: e, body: Body::Trivial }] }
    }

    pub fn body(body: Body) -> Self {
        NormalizedSpec { disjuncts: vec![Conjunct { now: StateExpr::Top, body }] }
    }

    pub fn form(f: NormalForm) -> Self {
        Self::body(Body::from_form(f))
    }

    /// The state expression this spec reduces to, if it has no temporal part.
    pub fn as_state(&self) -> Option<StateExpr> {
        if self.disjuncts.iter().all(|c| c.body == Body::Trivial) {
            Some(StateExpr::max(self.disjuncts.iter().map(|c| c.now.clone())))
        } else {
            None
        }
    }

    /// The lone NormalForm when the spec is exactly one unconstrained form.
    pub fn single_form(&self) -> Option<&NormalForm> {
        match self.disjuncts.as_slice() {
            [Conjunct { now: StateExpr::Top, body: Body::Form(f) }] => Some(f),
            _ => None,
        }
    }

    pub fn or(parts: impl IntoIterator<Item = NormalizedSpec>) -> Self {
        let mut disjuncts: Vec<Conjunct> = Vec::new();
        for p in parts {
            for c in p.disjuncts {
                if !disjuncts.contains(&c) {
                    disjuncts.push(c);
                }
            }
        }
        if let Some(s) = (NormalizedSpec { disjuncts: disjuncts.clone() }).as_state() {
            return Self::state(s);
        }
        if disjuncts.len() > 1 {
            disjuncts.retain(|c| c.now != StateExpr::Bottom);
        }
        NormalizedSpec { disjuncts }
    }

    /// Conjunction, distributed over the disjuncts of both sides.
    pub fn and(&self, other: &NormalizedSpec) -> Result<NormalizedSpec, Unsupported> {
        let mut parts = Vec::new();
        for a in &self.disjuncts {
            for b in &other.disjuncts {
                parts.push(NormalizedSpec { disjuncts: vec![a.and(b)?] });
            }
        }
        Ok(Self::or(parts))
    }

    pub fn as_predicate(&self) -> Predicate {
        Predicate::or(self.disjuncts.iter().map(Conjunct::as_predicate).collect())
    }

    /// Applies `f` to every NormalForm, nested ones included.
    pub fn map_forms(&self, f: &impl Fn(&NormalForm) -> NormalForm) -> NormalizedSpec {
        NormalizedSpec {
            disjuncts: self
                .disjuncts
                .iter()
                .map(|c| Conjunct {
                    now: c.now.clone(),
                    body: match &c.body {
                        Body::Trivial => Body::Trivial,
                        Body::Next(s) => Body::Next(Box::new(s.map_forms(f))),
                        Body::Form(nf) => {
                            let mut g = f(nf);
                            for u in &mut g.untils {
                                if let Reach::Nested(s) = &u.reach {
                                    u.reach = Reach::Nested(Box::new(s.map_forms(f)));
                                }
                            }
                            Body::Form(g)
                        }
                    },
                })
                .collect(),
        }
    }
}

impl Conjunct {
    pub fn and(&self, other: &Conjunct) -> Result<Conjunct, Unsupported> {
        let body = match (&self.body, &other.body) {
            (Body::Trivial, b) | (b, Body::Trivial) => b.clone(),
            (Body::Form(f), Body::Form(g)) => Body::from_form(f.and(g)),
            (Body::Next(s), Body::Next(t)) => Body::Next(Box::new(s.and(t)?)),
            _ => return Err(Unsupported),
        };
        Ok(Conjunct { now: StateExpr::min([self.now.clone(), other.now.clone()]), body })
    }

    pub fn as_predicate(&self) -> Predicate {
        let mut parts = Vec::new();
        if !self.now.is_top() || self.body == Body::Trivial {
            parts.push(self.now.to_predicate());
        }
        match &self.body {
            Body::Trivial => {}
            Body::Next(s) => parts.push(Predicate::next(s.as_predicate())),
            Body::Form(f) => parts.extend(f.conjuncts()),
        }
        Predicate::and(parts)
    }
}

impl Body {
    pub fn from_form(f: NormalForm) -> Body {
        if f.is_trivial() {
            Body::Trivial
        } else {
            Body::Form(f)
        }
    }
}

impl NormalForm {
    pub fn safety(q: StateExpr) -> Self {
        NormalForm { untils: vec![], loops: vec![], safety: q }
    }

    pub fn is_trivial(&self) -> bool {
        self.untils.is_empty() && self.loops.is_empty() && self.safety.is_top()
    }

    pub fn and(&self, other: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        for u in &other.untils {
            if !out.untils.contains(u) {
                out.untils.push(u.clone());
            }
        }
        for l in &other.loops {
            if !out.loops.contains(l) {
                out.loops.push(l.clone());
            }
        }
        out.safety = StateExpr::min([self.safety.clone(), other.safety.clone()]);
        out
    }

    /// The form with until `i` removed.
    pub fn without(&self, i: usize) -> NormalForm {
        let mut out = self.clone();
        out.untils.remove(i);
        out
    }

    /// What remains to be satisfied at the moment until `i` completes:
    /// its reach together with every other obligation.
    pub fn completion(&self, i: usize) -> Result<NormalizedSpec, Unsupported> {
        let rest = NormalizedSpec::form(self.without(i));
        self.untils[i].reach.to_spec().and(&rest)
    }

    /// Conjunction of every state constraint that must hold while untils are
    /// pending: the until avoids, the loop avoids and the safety term.
    pub fn guard(&self) -> StateExpr {
        StateExpr::min(
            self.untils
                .iter()
                .map(|u| u.avoid.clone())
                .chain(self.loop_guard_parts())
        )
    }

    /// `safety ∧ ⋀ q_j`: the invariant imposed by the G-part.
    pub fn invariant(&self) -> StateExpr {
        StateExpr::min(self.loop_guard_parts())
    }

    fn loop_guard_parts(&self) -> impl Iterator<Item = StateExpr> + '_ {
        self.loops.iter().map(|l| l.avoid.clone()).chain([self.safety.clone()])
    }

    /// Order-insensitive key: untils sorted, loops kept in order.
    pub fn key(&self) -> NormalForm {
        let mut k = self.clone();
        k.untils.sort_by_key(|u| format!("{u:?}"));
        k
    }

    fn conjuncts(&self) -> Vec<Predicate> {
        let mut parts: Vec<Predicate> = self
            .untils
            .iter()
            .map(|u| Predicate::until(u.avoid.to_predicate(), u.reach.to_spec().as_predicate()))
            .collect();
        let mut g: Vec<Predicate> =
            self.loops.iter().map(|l| Predicate::until(l.avoid.to_predicate(), l.reach.to_predicate())).collect();
        if !self.safety.is_top() {
            g.push(self.safety.to_predicate());
        }
        if !g.is_empty() {
            parts.push(Predicate::globally(Predicate::and(g)));
        }
        parts
    }

    pub fn as_predicate(&self) -> Predicate {
        let parts = self.conjuncts();
        if parts.is_empty() {
            Predicate::True
        } else {
            Predicate::and(parts)
        }
    }
}

impl Reach {
    pub fn to_spec(&self) -> NormalizedSpec {
        match self {
            Reach::State(s) => NormalizedSpec::state(s.clone()),
            Reach::Nested(n) => (**n).clone(),
        }
    }

    pub fn from_spec(spec: NormalizedSpec) -> Reach {
        match spec.as_state() {
            Some(s) => Reach::State(s),
            None => Reach::Nested(Box::new(spec)),
        }
    }
}

impl fmt::Display for NormalizedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_predicate())
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_predicate())
    }
}

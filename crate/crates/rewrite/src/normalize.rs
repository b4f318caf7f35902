use std::collections::HashSet;

use thiserror::Error;
use tlvc_logic::Predicate;

use crate::normal::{Body, LoopUntil, NormalForm, NormalizedSpec, Reach, Until};
use crate::StateExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FragmentReason {
    NegatedTemporal,
    DisjunctionOfTemporalUnderG,
    UntilLeftTemporal,
    UnsupportedNesting,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message}: {offending}")]
pub struct FragmentError {
    pub message: String,
    pub offending: Predicate,
    pub reason: FragmentReason,
}

fn reject(reason: FragmentReason, p: &Predicate) -> FragmentError {
    let message = match reason {
        FragmentReason::NegatedTemporal => "negation applied to a temporal operator",
        FragmentReason::DisjunctionOfTemporalUnderG => "disjunction with temporal operands under G",
        FragmentReason::UntilLeftTemporal => "left side of U must be a state formula",
        FragmentReason::UnsupportedNesting => "temporal nesting outside the decomposable class",
    };
    FragmentError { message: message.to_string(), offending: p.clone(), reason }
}

/// Rewrites `p` into a disjunction of normal forms.
///
/// Negations are pushed to atoms (never through temporal operators),
/// state-level connectives fold into [`StateExpr`], `F p` becomes `⊤ U p`,
/// G over a conjunction of untils becomes loop untils, `Gq ∧ Gq'` merges
/// into one safety term, and temporal reach terms become nested specs.
pub fn normalize(p: &Predicate) -> Result<NormalizedSpec, FragmentError> {
    let spec = norm(p, false)?;
    let mut seen = HashSet::new();
    if check(&spec, &mut seen).is_err() {
        return Err(reject(FragmentReason::UnsupportedNesting, p));
    }
    Ok(spec)
}

/// Every until completion must stay inside the class; explored once per form.
fn check(spec: &NormalizedSpec, seen: &mut HashSet<NormalForm>) -> Result<(), crate::Unsupported> {
    for c in &spec.disjuncts {
        match &c.body {
            Body::Trivial => {}
            Body::Next(s) => check(s, seen)?,
            Body::Form(f) => {
                if seen.insert(f.key()) {
                    for i in 0..f.untils.len() {
                        check(&f.completion(i)?, seen)?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn state_of(p: &Predicate, neg: bool) -> Option<StateExpr> {
    let s = StateExpr::from_predicate(p)?;
    Some(if neg { s.negate() } else { s })
}

fn norm(p: &Predicate, neg: bool) -> Result<NormalizedSpec, FragmentError> {
    use Predicate::*;
    if let Some(s) = state_of(p, neg) {
        return Ok(NormalizedSpec::state(s));
    }
    match p {
        Not(c) => norm(c, !neg),
        Next(_) | Finally(_) | Globally(_) | Until(..) if neg => Err(reject(FragmentReason::NegatedTemporal, p)),
        And(cs) | Or(cs) if matches!(p, And(_)) != neg => {
            let mut acc = NormalizedSpec::state(StateExpr::Top);
            for c in cs {
                acc = acc.and(&norm(c, neg)?).map_err(|_| reject(FragmentReason::UnsupportedNesting, p))?;
            }
            Ok(acc)
        }
        And(cs) | Or(cs) => Ok(NormalizedSpec::or(cs.iter().map(|c| norm(c, neg)).collect::<Result<Vec<_>, _>>()?)),
        Until(a, b) => {
            let avoid = state_of(a, false).ok_or_else(|| reject(FragmentReason::UntilLeftTemporal, p))?;
            Ok(until(avoid, norm(b, false)?))
        }
        Finally(b) => Ok(until(StateExpr::Top, norm(b, false)?)),
        Next(c) => Ok(NormalizedSpec::body(Body::Next(Box::new(norm(c, false)?)))),
        Globally(c) => {
            let mut form = NormalForm::safety(StateExpr::Top);
            under_g(c, false, &mut form)?;
            Ok(NormalizedSpec::form(form))
        }
        Atom(_) | True | False => unreachable!("state formulas handled above"),
    }
}

fn until(avoid: StateExpr, reach: NormalizedSpec) -> NormalizedSpec {
    // a U ⊤ holds at once with score a.
    if reach.as_state() == Some(StateExpr::Top) {
        return NormalizedSpec::state(avoid);
    }
    NormalizedSpec::form(NormalForm {
        untils: vec![Until { avoid, reach: Reach::from_spec(reach) }],
        loops: vec![],
        safety: StateExpr::Top,
    })
}

/// Collects the conjuncts of `G(p)` into loops and safety.
fn under_g(p: &Predicate, neg: bool, form: &mut NormalForm) -> Result<(), FragmentError> {
    use Predicate::*;
    if let Some(s) = state_of(p, neg) {
        form.safety = StateExpr::min([form.safety.clone(), s]);
        return Ok(());
    }
    let push_loop = |form: &mut NormalForm, avoid: StateExpr, reach: StateExpr| {
        if reach.is_top() {
            form.safety = StateExpr::min([form.safety.clone(), avoid]);
        } else {
            let l = LoopUntil { avoid, reach };
            if !form.loops.contains(&l) {
                form.loops.push(l);
            }
        }
    };
    match p {
        Not(c) => under_g(c, !neg, form),
        Next(_) | Finally(_) | Globally(_) | Until(..) if neg => Err(reject(FragmentReason::NegatedTemporal, p)),
        And(cs) | Or(cs) if matches!(p, And(_)) != neg => cs.iter().try_for_each(|c| under_g(c, neg, form)),
        And(_) | Or(_) => Err(reject(FragmentReason::DisjunctionOfTemporalUnderG, p)),
        Until(a, b) => {
            let avoid = state_of(a, false).ok_or_else(|| reject(FragmentReason::UntilLeftTemporal, p))?;
            let reach = state_of(b, false).ok_or_else(|| reject(FragmentReason::UnsupportedNesting, p))?;
            push_loop(form, avoid, reach);
            Ok(())
        }
        Finally(b) => {
            let reach = state_of(b, false).ok_or_else(|| reject(FragmentReason::UnsupportedNesting, p))?;
            push_loop(form, StateExpr::Top, reach);
            Ok(())
        }
        Globally(c) => under_g(c, false, form),
        Next(_) => Err(reject(FragmentReason::UnsupportedNesting, p)),
        Atom(_) | True | False => unreachable!("state formulas handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tlvc_logic::atom;

    fn s(name: &str) -> StateExpr {
        StateExpr::atom(name)
    }

    #[test]
    fn reach_and_safety() {
        let p = Predicate::and(vec![Predicate::finally(atom("r")), Predicate::globally(atom("q"))]);
        let n = normalize(&p).unwrap();
        assert_eq!(
            n.single_form().unwrap(),
            &NormalForm {
                untils: vec![Until { avoid: StateExpr::Top, reach: Reach::State(s("r")) }],
                loops: vec![],
                safety: s("q"),
            }
        );
    }

    #[test]
    fn recurrence_loops() {
        let p = Predicate::globally(Predicate::and(vec![Predicate::finally(atom("r1")), Predicate::finally(atom("r2"))]));
        let n = normalize(&p).unwrap();
        let f = n.single_form().unwrap();
        assert!(f.untils.is_empty());
        assert_eq!(
            f.loops,
            vec![
                LoopUntil { avoid: StateExpr::Top, reach: s("r1") },
                LoopUntil { avoid: StateExpr::Top, reach: s("r2") }
            ]
        );
        assert!(f.safety.is_top());
    }

    #[test]
    fn rejections() {
        let r = |p: Predicate| normalize(&p).unwrap_err().reason;
        assert_eq!(r(Predicate::not(Predicate::finally(atom("a")))), FragmentReason::NegatedTemporal);
        assert_eq!(
            r(Predicate::globally(Predicate::or(vec![Predicate::finally(atom("a")), Predicate::finally(atom("b"))]))),
            FragmentReason::DisjunctionOfTemporalUnderG
        );
        assert_eq!(r(Predicate::until(Predicate::finally(atom("a")), atom("b"))), FragmentReason::UntilLeftTemporal);
        assert_eq!(r(Predicate::globally(Predicate::next(atom("a")))), FragmentReason::UnsupportedNesting);
        assert_eq!(
            r(Predicate::and(vec![Predicate::next(atom("a")), Predicate::finally(atom("b"))])),
            FragmentReason::UnsupportedNesting
        );
        assert_eq!(
            r(Predicate::and(vec![Predicate::finally(Predicate::next(atom("a"))), Predicate::globally(atom("b"))])),
            FragmentReason::UnsupportedNesting
        );
    }

    #[test]
    fn offending_subtree_is_from_input() {
        let inner = Predicate::not(Predicate::globally(atom("a")));
        let p = Predicate::and(vec![atom("b"), Predicate::finally(inner)]);
        let e = normalize(&p).unwrap_err();
        assert_eq!(e.offending, Predicate::globally(atom("a")));
    }

    #[test]
    fn eventually_always_nests() {
        let n = normalize(&Predicate::finally(Predicate::globally(atom("r")))).unwrap();
        let f = n.single_form().unwrap();
        let Reach::Nested(inner) = &f.untils[0].reach else { panic!() };
        assert_eq!(inner.single_form().unwrap(), &NormalForm::safety(s("r")));
    }

    #[test]
    fn state_conjuncts_become_now() {
        let p = Predicate::and(vec![atom("a"), Predicate::finally(atom("b"))]);
        let n = normalize(&p).unwrap();
        assert_eq!(n.disjuncts.len(), 1);
        assert_eq!(n.disjuncts[0].now, s("a"));
    }

    #[test]
    fn next_conjunction_merges() {
        let p = Predicate::and(vec![Predicate::next(atom("a")), Predicate::next(Predicate::finally(atom("b")))]);
        let n = normalize(&p).unwrap();
        let Body::Next(inner) = &n.disjuncts[0].body else { panic!() };
        assert_eq!(inner.disjuncts[0].now, s("a"));
    }
}

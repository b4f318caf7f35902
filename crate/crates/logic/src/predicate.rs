use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Syntax tree of a temporal-logic predicate.
///
/// Atoms carry the identifier used in source text; they are resolved against
/// a [`Registry`](crate::Registry) when evaluated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Predicate {
    Atom(String),
    True,
    False,
    Not(Box<Predicate>),
    And(Vec<Predicate>),
    Or(Vec<Predicate>),
    Next(Box<Predicate>),
    Finally(Box<Predicate>),
    Globally(Box<Predicate>),
    Until(Box<Predicate>, Box<Predicate>),
}

use Predicate::*;

pub fn atom(name: &str) -> Predicate {
    Atom(name.to_string())
}

impl Predicate {
    pub fn not(p: Predicate) -> Self {
        Not(Box::new(p))
    }
    pub fn next(p: Predicate) -> Self {
        Next(Box::new(p))
    }
    pub fn finally(p: Predicate) -> Self {
        Finally(Box::new(p))
    }
    pub fn globally(p: Predicate) -> Self {
        Globally(Box::new(p))
    }
    pub fn until(a: Predicate, b: Predicate) -> Self {
        Until(Box::new(a), Box::new(b))
    }

    /// Conjunction; a single child is returned unwrapped. Panics on empty input.
    pub fn and(mut children: Vec<Predicate>) -> Self {
        assert!(!children.is_empty(), "empty conjunction");
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            And(children)
        }
    }

    /// Disjunction; a single child is returned unwrapped. Panics on empty input.
    pub fn or(mut children: Vec<Predicate>) -> Self {
        assert!(!children.is_empty(), "empty disjunction");
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            Or(children)
        }
    }

    pub fn children(&self) -> Vec<&Predicate> {
        match self {
            Atom(_) | True | False => vec![],
            Not(c) | Next(c) | Finally(c) | Globally(c) => vec![c],
            And(cs) | Or(cs) => cs.iter().collect(),
            Until(a, b) => vec![a, b],
        }
    }

    /// True when the tree contains no temporal operator.
    pub fn is_state(&self) -> bool {
        match self {
            Next(_) | Finally(_) | Globally(_) | Until(..) => false,
            _ => self.children().into_iter().all(Predicate::is_state),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Predicate::size).sum::<usize>()
    }

    /// Temporal nesting depth.
    pub fn depth(&self) -> usize {
        let inner = self.children().into_iter().map(Predicate::depth).max().unwrap_or(0);
        match self {
            Next(_) | Finally(_) | Globally(_) | Until(..) => inner + 1,
            _ => inner,
        }
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        if let Atom(name) = self {
            out.insert(name);
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Checks the structural invariants (non-empty And/Or).
    pub fn is_well_formed(&self) -> bool {
        match self {
            And(cs) | Or(cs) if cs.is_empty() => false,
            _ => self.children().into_iter().all(Predicate::is_well_formed),
        }
    }

    /// Copy with And/Or children sorted by their printed form.
    pub fn canonical(&self) -> Predicate {
        let sorted = |cs: &[Predicate]| {
            let mut keyed: Vec<(String, Predicate)> = cs
                .iter()
                .map(|c| {
                    let c = c.canonical();
                    (c.to_string(), c)
                })
                .collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            keyed.into_iter().map(|(_, c)| c).collect()
        };
        match self {
            Atom(_) | True | False => self.clone(),
            Not(c) => Predicate::not(c.canonical()),
            Next(c) => Predicate::next(c.canonical()),
            Finally(c) => Predicate::finally(c.canonical()),
            Globally(c) => Predicate::globally(c.canonical()),
            Until(a, b) => Predicate::until(a.canonical(), b.canonical()),
            And(cs) => And(sorted(cs)),
            Or(cs) => Or(sorted(cs)),
        }
    }
}

/// Tree equality up to reordering of And/Or children.
pub fn structural_eq(p: &Predicate, q: &Predicate) -> bool {
    p.canonical() == q.canonical()
}

/// Fully parenthesized rendering that parses back to the same tree.
impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, cs: &[Predicate], op: &str| {
            write!(f, "(")?;
            for (k, c) in cs.iter().enumerate() {
                if k > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        };
        match self {
            Atom(name) => write!(f, "{name}"),
            True => write!(f, "true"),
            False => write!(f, "false"),
            Not(c) => write!(f, "(! {c})"),
            Next(c) => write!(f, "(X {c})"),
            Finally(c) => write!(f, "(F {c})"),
            Globally(c) => write!(f, "(G {c})"),
            Until(a, b) => write!(f, "({a} U {b})"),
            And(cs) => join(f, cs, "&"),
            Or(cs) => join(f, cs, "|"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing() {
        let (a, b, c) = (atom("a"), atom("b"), atom("c"));
        assert_eq!(Predicate::until(a.clone(), b.clone()).to_string(), "(a U b)");
        assert_eq!(
            Predicate::and(vec![a.clone(), Predicate::or(vec![b, c])]).to_string(),
            "(a & (b | c))"
        );
        assert_eq!(Predicate::not(Predicate::globally(a)).to_string(), "(! (G a))");
    }

    #[test]
    fn structural_equality() {
        let (a, b) = (atom("a"), atom("b"));
        assert!(structural_eq(
            &Predicate::and(vec![a.clone(), b.clone()]),
            &Predicate::and(vec![b.clone(), a.clone()])
        ));
        assert!(!structural_eq(
            &Predicate::until(a.clone(), b.clone()),
            &Predicate::until(b, a.clone())
        ));
        assert!(!structural_eq(&Predicate::finally(a.clone()), &Predicate::until(True, a)));
    }

    #[test]
    fn depth_and_state() {
        let p = Predicate::globally(Predicate::finally(atom("r")));
        assert_eq!(p.depth(), 2);
        assert!(!p.is_state());
        assert!(Predicate::and(vec![atom("a"), Predicate::not(atom("b"))]).is_state());
    }
}

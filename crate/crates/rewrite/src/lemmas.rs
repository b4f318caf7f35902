//! The until-rearrangement identities behind the normal form, and an
//! exhaustive small-world checker for them.
//!
//! Robustness here uses inclusive until (the left side must hold at the
//! reaching instant too). Under that reading `G(q U r) ≡ Gq ∧ GF(q ∧ r)`,
//! so the guards of the G-of-until identities are the left sides `q_k`; the
//! weaker `q_k ∨ r_k` guard is only sound for strict until. See
//! [`g_of_double_until_weak_guard`] for the failing variant.

use std::borrow::Cow;

use tlvc_logic::{atom, Bits, Formula, Layout, Predicate, Registry};

pub struct Identity {
    pub name: &'static str,
    pub lhs: Predicate,
    pub rhs: Predicate,
}

fn a(name: &str) -> Predicate {
    atom(name)
}
fn and(v: Vec<Predicate>) -> Predicate {
    Predicate::and(v)
}
fn or(v: Vec<Predicate>) -> Predicate {
    Predicate::or(v)
}
fn u(l: Predicate, r: Predicate) -> Predicate {
    Predicate::until(l, r)
}
fn g(p: Predicate) -> Predicate {
    Predicate::globally(p)
}
fn qr(i: usize) -> (Predicate, Predicate) {
    (a(&format!("q{i}")), a(&format!("r{i}")))
}

/// `⋀ (q_i U r_i) [∧ Gq] ≡ (⋀ q_i [∧ q]) U ⋁ (r_i ∧ p^{-i})`.
pub fn until_conjunction(n: usize, safety: bool) -> Identity {
    let pair = |i: usize| {
        let (q, r) = qr(i);
        u(q, r)
    };
    let rest = |skip: usize| {
        let mut v: Vec<Predicate> = (1..=n).filter(|&j| j != skip).map(pair).collect();
        if safety {
            v.push(g(a("q")));
        }
        v
    };
    let mut lhs: Vec<Predicate> = (1..=n).map(pair).collect();
    let mut guard: Vec<Predicate> = (1..=n).map(|i| qr(i).0).collect();
    if safety {
        lhs.push(g(a("q")));
        guard.push(a("q"));
    }
    let reach = or((1..=n)
        .map(|i| {
            let mut v = vec![qr(i).1];
            v.extend(rest(i));
            and(v)
        })
        .collect());
    Identity {
        name: match (n, safety) {
            (2, false) => "until-pair",
            (_, false) => "until-conjunction",
            _ => "until-conjunction-with-safety",
        },
        lhs: and(lhs),
        rhs: u(and(guard), reach),
    }
}

/// `G(q U r) ≡ q U (r ∧ X G(q U r))`.
pub fn g_of_until() -> Identity {
    let p = g(u(a("q"), a("r")));
    Identity { name: "g-of-until", lhs: p.clone(), rhs: u(a("q"), and(vec![a("r"), Predicate::next(p)])) }
}

fn g_pair() -> Predicate {
    let ((q1, r1), (q2, r2)) = (qr(1), qr(2));
    g(and(vec![u(q1, r1), u(q2, r2)]))
}

fn g_pair_rhs(first: usize, guard: impl Fn(usize) -> Predicate) -> Predicate {
    let second = 3 - first;
    let tilde = |i: usize, side: Predicate| and(vec![side, guard(3 - i)]);
    let (qf, rf) = qr(first);
    let (qs, rs) = qr(second);
    u(
        tilde(first, qf),
        and(vec![tilde(first, rf), u(tilde(second, qs), and(vec![tilde(second, rs), g_pair()]))]),
    )
}

/// `G((q1 U r1) ∧ (q2 U r2)) ≡ q̃1 U (r̃1 ∧ (q̃2 U (r̃2 ∧ p)))` with
/// `q̃_i = q_i ∧ q_j`, `r̃_i = r_i ∧ q_j`; `first` picks which goal leads.
pub fn g_of_double_until(first: usize) -> Identity {
    Identity { name: "g-of-until-pair", lhs: g_pair(), rhs: g_pair_rhs(first, |j| qr(j).0) }
}

/// The same shape guarded by `q_j ∨ r_j`, which is not an identity under
/// inclusive until.
pub fn g_of_double_until_weak_guard() -> Identity {
    Identity {
        name: "g-of-until-pair-weak-guard",
        lhs: g_pair(),
        rhs: g_pair_rhs(1, |j| {
            let (q, r) = qr(j);
            or(vec![q, r])
        }),
    }
}

/// `⋀_{i∈I} G(q_i U r_i) ∧ ⋀_{j∈J} (q_j U r_j) ∧ Gq ≡ q̃ U r̃` with
/// `q̃ = ⋀ q_j ∧ q ∧ ⋀ q_i` and `r̃ = ⋁_j r_j ∧ p_{I, J∖j}`; for `J = ∅`
/// the right side is `G(⋀ (q_i ∧ q) U (r_i ∧ q))`.
pub fn master(loops: &[usize], untils: &[usize]) -> Identity {
    fn p(loops: &[usize], untils: &[usize]) -> Predicate {
        let mut v: Vec<Predicate> = loops.iter().map(|&i| g({ let (q, r) = qr(i); u(q, r) })).collect();
        v.extend(untils.iter().map(|&j| { let (q, r) = qr(j); u(q, r) }));
        v.push(g(a("q")));
        and(v)
    }
    let rhs = if untils.is_empty() {
        g(and(loops
            .iter()
            .map(|&i| {
                let (q, r) = qr(i);
                u(and(vec![q, a("q")]), and(vec![r, a("q")]))
            })
            .collect()))
    } else {
        let mut guard: Vec<Predicate> = untils.iter().map(|&j| qr(j).0).collect();
        guard.push(a("q"));
        guard.extend(loops.iter().map(|&i| qr(i).0));
        let reach = or(untils
            .iter()
            .map(|&j| {
                let rest: Vec<usize> = untils.iter().copied().filter(|&k| k != j).collect();
                and(vec![qr(j).1, p(loops, &rest)])
            })
            .collect());
        u(and(guard), reach)
    };
    Identity { name: "g-until-until-safety", lhs: p(loops, untils), rhs }
}

/// Every identity with the `(states, length)` bounds used for its
/// exhaustive check, chosen so that `atoms × states` stays enumerable.
pub fn catalogue() -> Vec<(Identity, usize, usize)> {
    vec![
        (until_conjunction(2, false), 4, 6),
        (until_conjunction(3, false), 3, 5),
        (until_conjunction(2, true), 4, 5),
        (g_of_until(), 4, 7),
        (g_of_double_until(1), 4, 6),
        (g_of_double_until(2), 4, 6),
        (master(&[1, 2], &[]), 4, 5),
        (master(&[1], &[2]), 4, 5),
        (master(&[2], &[1, 3]), 2, 6),
    ]
}

/// A lasso shape over canonical state labels `0..states`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub states: Vec<usize>,
    pub loop_start: usize,
    pub distinct: usize,
}

/// All lasso shapes of length ≤ `max_len` over at most `max_states` states,
/// labelled in order of first appearance, in which every state has at most
/// two distinct successors — i.e. every lasso realizable in a deterministic
/// two-action MDP with that many states, up to relabelling.
pub fn shapes(max_states: usize, max_len: usize) -> Vec<Shape> {
    fn grow(seq: &mut Vec<usize>, distinct: usize, max_states: usize, max_len: usize, out: &mut Vec<Shape>) {
        for p in 0..seq.len() {
            if succ_ok(seq, p) {
                out.push(Shape { states: seq.clone(), loop_start: p, distinct });
            }
        }
        if seq.len() == max_len {
            return;
        }
        for s in 0..(distinct + 1).min(max_states) {
            seq.push(s);
            if prefix_ok(seq) {
                grow(seq, distinct.max(s + 1), max_states, max_len, out);
            }
            seq.pop();
        }
    }
    fn fanout(edges: impl Iterator<Item = (usize, usize)>) -> bool {
        let mut succ: Vec<Vec<usize>> = Vec::new();
        for (x, y) in edges {
            if succ.len() <= x {
                succ.resize(x + 1, Vec::new());
            }
            if !succ[x].contains(&y) {
                succ[x].push(y);
                if succ[x].len() > 2 {
                    return false;
                }
            }
        }
        true
    }
    fn prefix_ok(seq: &[usize]) -> bool {
        fanout(seq.windows(2).map(|w| (w[0], w[1])))
    }
    fn succ_ok(seq: &[usize], p: usize) -> bool {
        fanout(seq.windows(2).map(|w| (w[0], w[1])).chain([(seq[seq.len() - 1], seq[p])]))
    }
    let mut out = Vec::new();
    grow(&mut vec![0], 1, max_states, max_len, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub shape: Shape,
    /// `(atom, value per state)` with values in `{-1, 1}`.
    pub valuation: Vec<(String, Vec<i8>)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExhaustiveReport {
    pub shapes: usize,
    pub valuations: u64,
    pub mismatches: u64,
    pub first: Option<Counterexample>,
}

/// Checks `lhs ≡ rhs` at every position of every lasso shape under every
/// assignment of `±1` to each atom at each state, 64 assignments per pass.
pub fn exhaustive_check(lhs: &Predicate, rhs: &Predicate, max_states: usize, max_len: usize) -> ExhaustiveReport {
    let mut names: Vec<String> = lhs.atoms().union(&rhs.atoms()).map(|s| s.to_string()).collect();
    names.sort();
    let mut report = ExhaustiveReport::default();
    let template = |k: usize| {
        let mut reg = Registry::new(k, Bits::TOP);
        for n in &names {
            reg.register(n, vec![Bits::BOTTOM; k]).unwrap();
        }
        reg
    };
    let bound = |k: usize| {
        let reg = template(k);
        (Formula::bind(lhs, &reg).unwrap(), Formula::bind(rhs, &reg).unwrap())
    };
    let formulas: Vec<_> = (0..=max_states).map(|k| if k == 0 { None } else { Some(bound(k)) }).collect();
    for shape in shapes(max_states, max_len) {
        report.shapes += 1;
        let k = shape.distinct;
        let bits = names.len() * k;
        let words: u64 = if bits <= 6 { 1 } else { 1 << (bits - 6) };
        let layout = Layout { states: Cow::Borrowed(&shape.states), loop_start: shape.loop_start };
        let (fl, fr) = formulas[k].as_ref().unwrap();
        for w in 0..words {
            let reg = fill(&names, k, w);
            let (x, y) = (fl.eval(&layout, &reg).unwrap(), fr.eval(&layout, &reg).unwrap());
            report.valuations += 64.min(1u64 << bits);
            let diff = x.iter().zip(&y).fold(0u64, |d, (a, b)| d | (a.0 ^ b.0));
            let diff = if bits < 6 { diff & ((1u64 << (1 << bits)) - 1) } else { diff };
            if diff != 0 {
                report.mismatches += diff.count_ones() as u64;
                if report.first.is_none() {
                    let lane = diff.trailing_zeros() as u64;
                    report.first = Some(decode(&shape, &names, w * 64 + lane));
                }
            }
        }
    }
    report
}

/// Bit `pos` of valuation index `v` is the sign of atom `pos / k` at state `pos % k`.
fn fill(names: &[String], k: usize, w: u64) -> Registry<Bits> {
    const LANES: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let mut reg = Registry::new(k, Bits::TOP);
    for (ai, name) in names.iter().enumerate() {
        let table = (0..k)
            .map(|s| {
                let pos = ai * k + s;
                Bits(if pos < 6 { LANES[pos] } else if w >> (pos - 6) & 1 == 1 { !0 } else { 0 })
            })
            .collect();
        reg.register(name, table).unwrap();
    }
    reg
}

fn decode(shape: &Shape, names: &[String], v: u64) -> Counterexample {
    let k = shape.distinct;
    let valuation = names
        .iter()
        .enumerate()
        .map(|(ai, n)| (n.clone(), (0..k).map(|s| if v >> (ai * k + s) & 1 == 1 { 1 } else { -1 }).collect()))
        .collect();
    Counterexample { shape: shape.clone(), valuation }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_enumeration_small() {
        // Length 1: [0] looping on itself.
        assert_eq!(shapes(1, 1), vec![Shape { states: vec![0], loop_start: 0, distinct: 1 }]);
        // Over two states with length ≤ 2: [0]; [0,0] at p=0,1; [0,1] at p=0,1.
        assert_eq!(shapes(2, 2).len(), 5);
        // Fan-out: 0→1, 0→2, 0→3 never appears.
        for s in shapes(4, 7) {
            let n = s.states.len();
            let mut succ = vec![std::collections::BTreeSet::new(); 4];
            for i in 0..n {
                succ[s.states[i]].insert(s.states[if i + 1 < n { i + 1 } else { s.loop_start }]);
            }
            assert!(succ.iter().all(|x| x.len() <= 2));
        }
    }

    #[test]
    fn detects_a_non_identity() {
        let r = exhaustive_check(&Predicate::finally(atom("a")), &Predicate::globally(atom("a")), 2, 3);
        assert!(r.mismatches > 0);
        let cex = r.first.unwrap();
        assert!(cex.valuation[0].1.contains(&1) && cex.valuation[0].1.contains(&-1));
    }

    #[test]
    fn confirms_an_identity() {
        let lhs = Predicate::finally(atom("a"));
        let rhs = Predicate::until(Predicate::True, atom("a"));
        let r = exhaustive_check(&lhs, &rhs, 3, 4);
        assert_eq!(r.mismatches, 0);
        assert!(r.valuations > 0);
    }
}

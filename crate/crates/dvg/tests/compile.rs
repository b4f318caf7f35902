use proptest::prelude::*;
use tlvc_dvg::{compile, compile_with, from_json, to_dot, to_json, CompileOptions, DvgError, NodeId, NodeKind, ValueExpr};
use tlvc_logic::{atom, Predicate};
use tlvc_parser::parse_str;
use tlvc_rewrite::{normalize, StateExpr};

fn dvg(src: &str) -> tlvc_dvg::Dvg {
    compile(&normalize(&parse_str(src).unwrap()).unwrap())
}

fn c(name: &str) -> ValueExpr {
    ValueExpr::Const(StateExpr::atom(name))
}

#[test]
fn two_goals() {
    let g = dvg("F r1 & F r2");
    assert_eq!(g.len(), 3);
    let root = g.node(g.root);
    assert_eq!(root.kind, NodeKind::ReachAvoid);
    let reach = root.reach.as_ref().unwrap();
    let ValueExpr::Max(parts) = reach else { panic!("{reach}") };
    assert_eq!(parts.len(), 2);
    let child_of = |p: &ValueExpr| {
        let ValueExpr::Min(v) = p else { panic!() };
        let ValueExpr::ValueRef(id) = v[1] else { panic!() };
        (v[0].clone(), id)
    };
    let (r1, a) = child_of(&parts[0]);
    let (r2, b) = child_of(&parts[1]);
    assert_eq!((r1, r2), (c("r1"), c("r2")));
    assert_eq!(g.node(a).label, "(true U r2)");
    assert_eq!(g.node(b).label, "(true U r1)");
    for id in [a, b] {
        assert_eq!(g.node(id).kind, NodeKind::ReachAvoid);
        assert!(g.node(id).children.is_empty());
    }
    assert_eq!(g.stats().edges, 2);
}

#[test]
fn recurrence_is_a_self_loop() {
    let g = dvg("G(F r)");
    assert_eq!(g.len(), 1);
    let n = g.node(g.root);
    assert_eq!(n.kind, NodeKind::ReachAvoidLoop);
    assert_eq!(n.loop_next, Some(g.root));
    assert_eq!(n.reach, Some(ValueExpr::Min(vec![c("r"), ValueExpr::NextValueRef(g.root)])));
}

#[test]
fn subset_count_law() {
    for n in 1..=5 {
        let goals: Vec<Predicate> = (0..n).map(|i| Predicate::finally(atom(&format!("r{i}")))).collect();
        let g = compile(&normalize(&Predicate::and(goals)).unwrap());
        let s = g.stats();
        assert_eq!(s.value_nodes(), (1 << n) - 1);
        assert_eq!(s.nodes, (1 << n) - 1);
        // Every node is a distinct subset of pending goals.
        let labels: std::collections::BTreeSet<_> = g.nodes.iter().map(|n| n.label.clone()).collect();
        assert_eq!(labels.len(), g.len());
    }
}

#[test]
fn safety_shared_by_every_reach_node() {
    let s = dvg("F r1 & F r2 & G q").stats();
    assert_eq!((s.reach_avoid, s.avoid, s.value_nodes()), (3, 1, 3));
    let g = dvg("F r1 & F r2 & G q");
    for n in g.nodes.iter().filter(|n| n.kind == NodeKind::ReachAvoid) {
        assert_eq!(n.avoid, StateExpr::atom("q"));
    }
}

#[test]
fn loop_pair() {
    let g = dvg("G(F a & F b)");
    let s = g.stats();
    assert_eq!((s.nodes, s.reach_avoid_loop, s.largest_loop, s.sccs), (2, 2, 2, 1));
    let dot = to_dot(&g);
    assert_eq!(dot.matches("style=dashed").count(), 2);
    assert_eq!(g.node(NodeId(0)).loop_next, Some(NodeId(1)));
    assert_eq!(g.node(NodeId(1)).loop_next, Some(NodeId(0)));
}

#[test]
fn dot_shapes() {
    let dot = to_dot(&dvg("G q"));
    assert_eq!(dot.matches("shape=").count(), 1);
    assert_eq!(dot.matches("->").count(), 0);
    let dot = to_dot(&dvg("F r1 & F r2"));
    assert_eq!((dot.matches("shape=").count(), dot.matches("->").count()), (3, 2));
}

#[test]
fn combinations_and_next() {
    let g = dvg("a & F b | X G c");
    let root = g.node(g.root);
    assert_eq!(root.kind, NodeKind::MaxCombine);
    assert_eq!(g.stats().one_step, 1);
    assert_eq!(g.validate(), Ok(()));
}

#[test]
fn json_round_trip_and_validation() {
    let g = dvg("G(F a & (b U c)) & F(d & G e) | X F a");
    let text = to_json(&g);
    assert_eq!(from_json(&text).unwrap(), g);
    assert!(matches!(from_json(&text[..text.len() / 2]), Err(DvgError::Json(_))));
    let wrong = text.replacen("\"version\": 1", "\"version\": 9", 1);
    assert!(matches!(from_json(&wrong), Err(DvgError::Schema { .. })));
    let dangling = text.replacen("\"ValueRef\": 0", "\"ValueRef\": 99", 1);
    assert_ne!(dangling, text);
    assert!(matches!(from_json(&dangling), Err(DvgError::Invalid(_))));
}

#[test]
fn hash_consing_merges_repeated_one_step_nodes() {
    let spec = normalize(&parse_str("(a & X F b) | (c & X F b)").unwrap()).unwrap();
    let with = compile(&spec);
    let without = compile_with(&spec, CompileOptions { dedup: false });
    assert!(with.len() < without.len());
    assert_eq!(without.validate(), Ok(()));
}

fn arb_spec_text() -> impl Strategy<Value = String> {
    let atom = prop::sample::select(vec!["a", "b", "c", "!a", "true"]);
    let unit = prop_oneof![
        atom.clone().prop_map(|a| format!("F {a}")),
        atom.clone().prop_map(|a| format!("G {a}")),
        (atom.clone(), atom.clone()).prop_map(|(a, b)| format!("({a} U {b})")),
        atom.clone().prop_map(|a| format!("F G {a}")),
        atom.clone().prop_map(|a| format!("G F {a}")),
        (atom.clone(), atom.clone()).prop_map(|(a, b)| format!("G(F {a} & ({a} U {b}))")),
        atom.clone().prop_map(|a| format!("X F {a}")),
        (atom.clone(), atom.clone()).prop_map(|(a, b)| format!("({a} U F {b})")),
        atom.prop_map(|a| a.to_string()),
    ];
    prop::collection::vec(prop::collection::vec(unit, 1..4).prop_map(|v| v.join(" & ")), 1..3).prop_map(|v| v.join(" | "))
}

proptest! {
    #[test]
    fn compiled_graphs_are_well_formed(src in arb_spec_text()) {
        let p = parse_str(&src).unwrap();
        if let Ok(n) = normalize(&p) {
            for opts in [CompileOptions { dedup: true }, CompileOptions { dedup: false }] {
                let g = compile_with(&n, opts);
                prop_assert_eq!(g.validate(), Ok(()));
                prop_assert_eq!(from_json(&to_json(&g)).unwrap(), g.clone());
                for comp in &g.topo_order {
                    let cyclic = comp.len() > 1 || g.node(comp[0]).children.contains(&comp[0]);
                    if cyclic {
                        prop_assert!(comp.iter().all(|&i| g.node(i).kind == NodeKind::ReachAvoidLoop));
                    }
                }
            }
        }
    }
}

use tlvc_rewrite::lemmas::{catalogue, exhaustive_check, g_of_double_until_weak_guard, g_of_until, until_conjunction};

// Reduced bounds keep this quick; the acceptance suite runs the full ones.
#[test]
fn identities_hold_on_small_worlds() {
    for (id, states, len) in catalogue() {
        let r = exhaustive_check(&id.lhs, &id.rhs, states.min(3), len.min(4));
        assert_eq!(r.mismatches, 0, "{}: {:?}", id.name, r.first);
        assert!(r.valuations > 0);
    }
}

#[test]
fn weak_guard_fails_under_inclusive_until() {
    let id = g_of_double_until_weak_guard();
    let r = exhaustive_check(&id.lhs, &id.rhs, 2, 3);
    assert!(r.mismatches > 0);
    let cex = r.first.unwrap();
    // The goal being guarded is reached where its own left side fails.
    let get = |n: &str| cex.valuation.iter().find(|(a, _)| a == n).unwrap().1.clone();
    assert!(get("q2").contains(&-1));
}

#[test]
fn identity_shapes_are_stable() {
    assert_eq!(until_conjunction(2, false).rhs.to_string(),
        "((q1 & q2) U ((r1 & (q2 U r2)) | (r2 & (q1 U r1))))");
    assert_eq!(g_of_until().rhs.to_string(), "(q U (r & (X (G (q U r)))))");
}

//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are reported but not asserted; each
//! one is analysed in the project decision log.

use std::collections::BTreeMap;
use std::fs;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tlvc_cli::suite::{self, Instance};
use tlvc_cli::verify::{contraction_violations, LIMIT_GAP};
use tlvc_cli::{pipeline, Env, Settings};
use tlvc_dvg::compile;
use tlvc_logic::Registry;
use tlvc_mdp::{instances, Mdp};
use tlvc_oracle::{gf_iteration, ladder, loop_iteration, oracle_value};
use tlvc_policy::{build_comparison_tree, replay, score_rollout};
use tlvc_rewrite::lemmas::{catalogue, exhaustive_check};
use tlvc_rewrite::{normalize, StateExpr};
use tlvc_solver::{solve_schedule, sup_dist};

/// Criteria that fail with the loop operator as specified. For these the
/// run still asserts the criterion restricted to loop-free specs.
const KNOWN_FAILURES: &[usize] = &[1, 2, 8];

const SEED: u64 = 2024;
const INSTANCES: usize = 200;
const MARGIN: f64 = 0.05;

struct Outcome {
    criterion: usize,
    pass: bool,
    detail: String,
    /// The criterion over loop-free specs only, where that split applies.
    loop_free: Option<bool>,
}

fn settings() -> Settings {
    Settings { gamma_schedule: vec![0.9, 0.99, 0.999], tol: 1e-9, max_iters: None, seed: SEED }
}

#[derive(Default)]
struct InstanceResult {
    loops: bool,
    disagreements: Vec<String>,
    monotone: bool,
    final_gap: f64,
    policy_tested: usize,
    policy_failures: Vec<String>,
    replay_tested: usize,
    replay_failures: usize,
}

fn run_instance(inst: &Instance) -> InstanceResult {
    let s = settings();
    let env = Env::from_grid(&format!("suite#{}", inst.index), inst.grid.clone()).unwrap();
    let p = pipeline(inst.spec).unwrap();
    let legs = solve_schedule(&p.dvg, &env.mdp, &env.reg, &s.solve_config()).unwrap();
    let oracle = oracle_value(&p.spec, &env.mdp, &env.reg).unwrap();
    let gaps: Vec<f64> = legs.iter().map(|l| sup_dist(l.table(p.dvg.root), &oracle)).collect();
    let sol = legs.last().unwrap();
    let root = sol.table(p.dvg.root);
    let mut out = InstanceResult {
        loops: p.dvg.stats().reach_avoid_loop > 0,
        monotone: gaps.windows(2).all(|w| w[1] <= w[0] + 10.0 * s.tol),
        final_gap: *gaps.last().unwrap(),
        ..Default::default()
    };
    for (x, (&o, &v)) in oracle.iter().zip(root).enumerate() {
        if o.abs() >= MARGIN && (o > 0.0) != (v > 0.0) {
            out.disagreements.push(format!("#{} `{}` state {}: solver {v:.4} oracle {o:.4}", inst.index, inst.spec, env.describe_state(x)));
        }
    }
    let horizon = 4 * env.mdp.state_count() * p.dvg.nodes.len() + 10;
    for x0 in 0..env.mdp.state_count() {
        let tree = build_comparison_tree(x0, sol, &p.dvg, &env.mdp, &env.reg, horizon).unwrap();
        out.replay_tested += 1;
        if replay(&tree, x0, sol, &p.dvg, &env.mdp).unwrap() != tree.states {
            out.replay_failures += 1;
        }
        if oracle[x0] < MARGIN {
            continue;
        }
        out.policy_tested += 1;
        let run = score_rollout(x0, sol, &p.dvg, &env.mdp, &env.reg, &p.pred, horizon).unwrap();
        if run.robustness < 0.0 {
            out.policy_failures.push(format!(
                "#{} `{}` from {}: robustness {:.3} (oracle {:.3}) trace {}",
                inst.index,
                inst.spec,
                env.describe_state(x0),
                run.robustness,
                oracle[x0],
                tlvc_cli::describe_trace(&run.trace)
            ));
        }
    }
    out
}

fn suite_criteria() -> Vec<Outcome> {
    let instances: Vec<Instance> = (0..INSTANCES).map(|k| suite::instance(SEED, k)).collect();
    let results: Vec<InstanceResult> = instances.par_iter().map(run_instance).collect();
    let loop_free = || results.iter().filter(|r| !r.loops);
    let sign_ok = |r: &InstanceResult| r.disagreements.is_empty();
    let limit_ok = |r: &InstanceResult| r.monotone && r.final_gap <= LIMIT_GAP;
    let policy_ok = |rs: &mut dyn Iterator<Item = &InstanceResult>| {
        let (mut tested, mut failed, mut replay_bad) = (0, 0, 0);
        for r in rs {
            tested += r.policy_tested;
            failed += r.policy_failures.len();
            replay_bad += r.replay_failures;
        }
        1.0 - failed as f64 / tested.max(1) as f64 >= 0.99 && replay_bad == 0
    };
    println!("suite: {} instances, {} with loop nodes", results.len(), results.iter().filter(|r| r.loops).count());

    let mut by_template: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for (inst, r) in instances.iter().zip(&results) {
        let e = by_template.entry(inst.spec).or_default();
        e.0 += 1;
        e.1 += usize::from(!r.disagreements.is_empty());
    }
    let disagreements: Vec<&String> = results.iter().flat_map(|r| &r.disagreements).collect();
    let bad_templates: Vec<String> = by_template
        .iter()
        .filter(|(_, (_, bad))| *bad > 0)
        .map(|(t, (n, bad))| format!("`{t}` {bad}/{n}"))
        .collect();
    for d in disagreements.iter().take(10) {
        println!("  sign: {d}");
    }
    let c1 = Outcome {
        criterion: 1,
        pass: disagreements.is_empty(),
        loop_free: Some(loop_free().all(sign_ok)),
        detail: format!(
            "{} instances, {} sign disagreements at margin {MARGIN}{}",
            INSTANCES,
            disagreements.len(),
            if bad_templates.is_empty() { String::new() } else { format!(" (instances affected: {})", bad_templates.join(", ")) }
        ),
    };

    let not_monotone = results.iter().filter(|r| !r.monotone).count();
    let too_far: Vec<(usize, f64)> = results.iter().enumerate().filter(|(_, r)| r.final_gap > LIMIT_GAP).map(|(k, r)| (k, r.final_gap)).collect();
    let worst = results.iter().map(|r| r.final_gap).fold(0.0, f64::max);
    for (k, g) in too_far.iter().take(10) {
        println!("  limit: #{k} `{}` gap {g:.4}", instances[*k].spec);
    }
    let c2 = Outcome {
        criterion: 2,
        pass: not_monotone == 0 && too_far.is_empty(),
        loop_free: Some(loop_free().all(limit_ok)),
        detail: format!("{not_monotone} non-monotone, {} above {LIMIT_GAP} at gamma 0.999 (worst {worst:.4})", too_far.len()),
    };

    let tested: usize = results.iter().map(|r| r.policy_tested).sum();
    let failures: Vec<&String> = results.iter().flat_map(|r| &r.policy_failures).collect();
    let rate = 1.0 - failures.len() as f64 / tested.max(1) as f64;
    let replays: usize = results.iter().map(|r| r.replay_tested).sum();
    let replay_bad: usize = results.iter().map(|r| r.replay_failures).sum();
    for f in failures.iter().take(10) {
        println!("  policy: {f}");
    }
    let mut failing: BTreeMap<&str, usize> = BTreeMap::new();
    for (inst, r) in instances.iter().zip(&results) {
        *failing.entry(inst.spec).or_default() += r.policy_failures.len();
    }
    let failing: Vec<String> = failing.iter().filter(|(_, n)| **n > 0).map(|(t, n)| format!("`{t}` {n}")).collect();
    let c8 = Outcome {
        criterion: 8,
        pass: rate >= 0.99 && replay_bad == 0,
        loop_free: Some(policy_ok(&mut loop_free())),
        detail: format!(
            "robustness >= 0 on {}/{tested} states ({:.2}%), replay exact on {}/{replays} starts",
            tested - failures.len(),
            100.0 * rate,
            replays - replay_bad
        ) + &if failing.is_empty() { String::new() } else { format!(" (failing states: {})", failing.join(", ")) },
    };
    vec![c1, c2, c8]
}

fn contraction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = [0; 3];
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let mdp = Mdp::random(n, rng.gen_range(1..=4), &mut rng);
        let b = contraction_violations(&mdp, 1, &mut rng);
        for k in 0..3 {
            bad[k] += b[k];
        }
    }
    Outcome {
        criterion: 3,
        loop_free: None,
        pass: bad == [0; 3],
        detail: format!("1000 samples per operator; violations avoid={} reach-avoid={} loop={}", bad[0], bad[1], bad[2]),
    }
}

fn rewrite_soundness() -> Outcome {
    let reports: Vec<(String, usize, usize, u64, u64)> = catalogue()
        .into_par_iter()
        .map(|(id, states, len)| {
            let r = exhaustive_check(&id.lhs, &id.rhs, states, len);
            (id.name.to_string(), states, len, r.valuations, r.mismatches)
        })
        .collect();
    let mismatches: u64 = reports.iter().map(|r| r.4).sum();
    let valuations: u64 = reports.iter().map(|r| r.3).sum();
    let bounds: Vec<String> = reports.iter().map(|(n, s, l, _, _)| format!("{n}[{s}/{l}]")).collect();
    Outcome {
        criterion: 4,
        loop_free: None,
        pass: mismatches == 0,
        detail: format!("{} identities, {valuations} traces, {mismatches} mismatches; states/length {}", reports.len(), bounds.join(" ")),
    }
}

fn node_count_law() -> Outcome {
    let counts: Vec<(usize, usize)> = (1..=5)
        .map(|n| {
            let src = (1..=n).map(|i| format!("F r{i}")).collect::<Vec<_>>().join(" & ");
            (n, compile(&normalize(&pipeline(&src).unwrap().pred).unwrap()).stats().value_nodes())
        })
        .collect();
    Outcome {
        criterion: 5,
        loop_free: None,
        pass: counts.iter().all(|&(n, c)| c == (1 << n) - 1),
        detail: counts.iter().map(|(n, c)| format!("N={n}:{c}")).collect::<Vec<_>>().join(" "),
    }
}

fn canoe() -> Outcome {
    let (mdp, reg) = instances::canoe();
    let env = Env { name: "canoe".into(), mdp, reg, grid: None };
    let value = |src: &str| {
        let p = pipeline(src).unwrap();
        let legs = solve_schedule(&p.dvg, &env.mdp, &env.reg, &settings().solve_config()).unwrap();
        legs.last().unwrap().value(p.dvg.root, instances::CANOE_START)
    };
    let (both, fr, gq) = (value("F r & G q"), value("F r"), value("G q"));
    Outcome {
        criterion: 6,
        loop_free: None,
        pass: both <= -0.05 && fr >= 0.05 && gq >= 0.05,
        detail: format!("V[F r & G q]={both:.4} V[F r]={fr:.4} V[G q]={gq:.4} at x0"),
    }
}

const LEVELS: [f64; 6] = [-1.0, -0.6, -0.2, 0.3, 0.7, 1.0];

fn random_reg(rng: &mut impl Rng, n: usize, atoms: &[&str]) -> Registry<f64> {
    let mut r = Registry::new(n, 1.0);
    for a in atoms {
        r.register(a, (0..n).map(|_| LEVELS[rng.gen_range(0..LEVELS.len())]).collect()).unwrap();
    }
    r
}

fn cross_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let gf = normalize(&pipeline("G F r").unwrap().pred).unwrap();
    let g2 = normalize(&pipeline("G(q1 U r1 & q2 U r2)").unwrap().pred).unwrap();
    let pairs = [(StateExpr::atom("q1"), StateExpr::atom("r1")), (StateExpr::atom("q2"), StateExpr::atom("r2"))];
    let (mut slow, mut wrong, mut max_rounds) = (0, 0, 0);
    for k in 0..200 {
        let n = rng.gen_range(1..=8);
        let mdp = Mdp::random(n, rng.gen_range(1..=3), &mut rng);
        let (spec, it, reg) = if k % 2 == 0 {
            let reg = random_reg(&mut rng, n, &["r"]);
            let bound = n * ladder(&gf, &reg).unwrap().len();
            (&gf, gf_iteration(&StateExpr::atom("r"), &mdp, &reg, bound), reg)
        } else {
            let reg = random_reg(&mut rng, n, &["q1", "r1", "q2", "r2"]);
            let bound = n * ladder(&g2, &reg).unwrap().len();
            (&g2, loop_iteration(&pairs, &mdp, &reg, bound), reg)
        };
        match it {
            Ok(it) => {
                max_rounds = max_rounds.max(it.rounds);
                if it.root() != oracle_value(spec, &mdp, &reg).unwrap().as_slice() {
                    wrong += 1;
                }
            }
            Err(_) => slow += 1,
        }
    }
    Outcome {
        criterion: 7,
        loop_free: None,
        pass: slow == 0 && wrong == 0,
        detail: format!("200 MDPs: {slow} exceeded n*ladder rounds, {wrong} differ from the sweep (max rounds {max_rounds})"),
    }
}

fn determinism() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let grid = "rows = 5\ncols = 5\nwalls = [[2, 2]]\nregion.r0 = [0, 4, 0, 4]\nregion.r1 = [4, 0, 4, 0]\nregion.r2 = [2, 0, 2, 1]\n";
    fs::write(dir.path().join("grid.toml"), grid).unwrap();
    let run = |out: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_tlvc"))
            .current_dir(dir.path())
            .args(["--env", "grid.toml", "--seed", "42", "--out", out, "verify", "-e", "G(F r0 & F r1) & G !r2"])
            .args(["--samples", "50", "--contraction", "100", "--permute-loops"])
            .output()
            .unwrap();
        (o.stdout, fs::read(dir.path().join(out).join("verify.txt")).unwrap_or_default())
    };
    let (a, b) = (run("a"), run("b"));
    Outcome {
        criterion: 9,
        loop_free: None,
        pass: !a.0.is_empty() && a == b,
        detail: format!("two verify runs, {} report bytes, identical: {}", a.0.len(), a == b),
    }
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let mut outcomes = suite_criteria();
    let suite_time = start.elapsed();
    outcomes.extend([contraction(), rewrite_soundness(), node_count_law(), canoe(), cross_oracle(), determinism()]);
    outcomes.sort_by_key(|o| o.criterion);
    for o in &outcomes {
        let tag = if o.pass { "PASS" } else if KNOWN_FAILURES.contains(&o.criterion) { "FAIL (known)" } else { "FAIL" };
        println!("criterion {}: {tag} - {}", o.criterion, o.detail);
        if let Some(ok) = o.loop_free {
            println!("criterion {} on loop-free specs: {}", o.criterion, if ok { "PASS" } else { "FAIL" });
        }
    }
    println!("suite time {:.1}s, total {:.1}s", suite_time.as_secs_f64(), start.elapsed().as_secs_f64());
    for o in &outcomes {
        if o.pass && KNOWN_FAILURES.contains(&o.criterion) {
            println!("note: criterion {} is listed as a known failure but passed", o.criterion);
        }
    }
    let unexpected: Vec<usize> = outcomes
        .iter()
        .filter(|o| {
            let known = KNOWN_FAILURES.contains(&o.criterion);
            (!o.pass && !known) || (known && o.loop_free == Some(false))
        })
        .map(|o| o.criterion)
        .collect();
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}

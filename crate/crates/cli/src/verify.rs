use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tlvc_dvg::compile;
use tlvc_logic::{robustness, Predicate, Registry};
use tlvc_mdp::{random_lasso, Mdp};
use tlvc_oracle::oracle_value;
use tlvc_rewrite::{check_equivalence, lemmas, NormalForm};
use tlvc_solver::{backup_avoid, backup_reach_avoid, backup_reach_avoid_loop, solve, solve_schedule, sup_dist};

use crate::commands::{write, Pipeline, Settings};
use crate::{CliError, Env};

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Oracle values closer to zero than this are not sign-checked.
    pub margin: f64,
    /// Random lassos per rewrite check (0 skips them).
    pub samples: usize,
    /// Random `(V, W)` pairs per operator for the contraction self-test.
    pub contraction: Option<usize>,
    /// Re-solve with every rotation of the loop order and compare roots.
    pub permute_loops: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { margin: 0.05, samples: 200, contraction: None, permute_loops: false }
    }
}

/// Largest allowed `|V^γ − V*|` at the final discount.
pub const LIMIT_GAP: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct SignDisagreement {
    pub state: usize,
    pub solver: f64,
    pub oracle: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub oracle: Vec<f64>,
    /// Root table at each discount of the schedule.
    pub roots: Vec<(f64, Vec<f64>)>,
    /// `max_x |V^γ(x) − V*(x)|` per discount.
    pub gaps: Vec<f64>,
    pub disagreements: Vec<SignDisagreement>,
}

impl Comparison {
    pub fn monotone(&self, slack: f64) -> bool {
        self.gaps.windows(2).all(|w| w[1] <= w[0] + slack)
    }

    pub fn final_gap(&self) -> f64 {
        *self.gaps.last().expect("non-empty schedule")
    }
}

/// Solver roots along the schedule against the oracle.
pub fn compare(p: &Pipeline, env: &Env, settings: &Settings, margin: f64) -> Result<Comparison, CliError> {
    let legs = solve_schedule(&p.dvg, &env.mdp, &env.reg, &settings.solve_config())?;
    let oracle = oracle_value(&p.spec, &env.mdp, &env.reg)?;
    let roots: Vec<(f64, Vec<f64>)> = legs.iter().map(|s| (s.gamma, s.table(p.dvg.root).to_vec())).collect();
    let gaps = roots.iter().map(|(_, v)| sup_dist(v, &oracle)).collect();
    let last = &roots.last().expect("non-empty schedule").1;
    let disagreements = oracle
        .iter()
        .zip(last)
        .enumerate()
        .filter(|(_, (&o, &v))| o.abs() >= margin && (o > 0.0) != (v > 0.0))
        .map(|(state, (&oracle, &solver))| SignDisagreement { state, solver, oracle })
        .collect();
    Ok(Comparison { oracle, roots, gaps, disagreements })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SampleCheck {
    pub samples: usize,
    pub mismatches: usize,
}

/// Random-lasso agreement of two predicates on an environment whose atom
/// values are redrawn from `{-1, -0.5, 0.5, 1}`.
pub fn sample_identity(lhs: &Predicate, rhs: &Predicate, mdp: &Mdp, samples: usize, rng: &mut impl Rng) -> Result<SampleCheck, CliError> {
    let mut names = lhs.atoms();
    names.extend(rhs.atoms());
    let mut reg = Registry::new(mdp.state_count(), 1.0);
    for a in &names {
        let values = (0..mdp.state_count()).map(|_| [-1.0, -0.5, 0.5, 1.0][rng.gen_range(0..4)]).collect();
        reg.register(a, values)?;
    }
    let mut out = SampleCheck { samples, mismatches: 0 };
    for _ in 0..samples {
        let memory = rng.gen_range(1..4);
        let t = random_lasso(mdp, memory, rng);
        if robustness(lhs, &t, 0, &reg)? != robustness(rhs, &t, 0, &reg)? {
            out.mismatches += 1;
        }
    }
    Ok(out)
}

/// Counts `‖B[V] − B[W]‖∞ > γ‖V − W‖∞` over random pairs, for each of the
/// three operators. The slack absorbs floating-point rounding only.
pub fn contraction_violations(mdp: &Mdp, samples: usize, rng: &mut impl Rng) -> [usize; 3] {
    const SLACK: f64 = 1e-12;
    let n = mdp.state_count();
    let table = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect() };
    let mut local = ChaCha8Rng::seed_from_u64(rng.gen());
    let mut bad = [0; 3];
    for _ in 0..samples {
        let g: f64 = local.gen_range(0.01..0.9999);
        let (v, w, v2, w2) = (table(&mut local), table(&mut local), table(&mut local), table(&mut local));
        let (r, q) = (table(&mut local), table(&mut local));
        let d = sup_dist(&v, &w);
        if sup_dist(&backup_avoid(&v, &q, mdp, g), &backup_avoid(&w, &q, mdp, g)) > g * d + SLACK {
            bad[0] += 1;
        }
        if sup_dist(&backup_reach_avoid(&v, &r, &q, mdp, g), &backup_reach_avoid(&w, &r, &q, mdp, g)) > g * d + SLACK {
            bad[1] += 1;
        }
        let joint = d.max(sup_dist(&v2, &w2));
        let (vs, ws) = ([v, v2], [w, w2]);
        let worst = (0..2)
            .map(|j| sup_dist(&backup_reach_avoid_loop(&vs, j, &r, &q, mdp, g), &backup_reach_avoid_loop(&ws, j, &r, &q, mdp, g)))
            .fold(0.0, f64::max);
        if worst > g * joint + SLACK {
            bad[2] += 1;
        }
    }
    bad
}

fn rotate_loops(f: &NormalForm, k: usize) -> NormalForm {
    let mut out = f.clone();
    if !out.loops.is_empty() {
        let len = out.loops.len();
        out.loops.rotate_left(k % len);
    }
    out
}

fn max_loops(p: &Pipeline) -> usize {
    let mut most = 0;
    fn walk(s: &tlvc_rewrite::NormalizedSpec, most: &mut usize) {
        for c in &s.disjuncts {
            match &c.body {
                tlvc_rewrite::Body::Form(f) => {
                    *most = (*most).max(f.loops.len());
                    for u in &f.untils {
                        if let tlvc_rewrite::Reach::Nested(n) = &u.reach {
                            walk(n, most);
                        }
                    }
                }
                tlvc_rewrite::Body::Next(n) => walk(n, most),
                tlvc_rewrite::Body::Trivial => {}
            }
        }
    }
    walk(&p.spec, &mut most);
    most
}

pub struct VerifyReport {
    pub text: String,
    pub pass: bool,
    pub comparison: Comparison,
}

/// Full verification of one spec on one environment. The report depends
/// only on its inputs and `settings.seed`.
pub fn verify(p: &Pipeline, env: &Env, settings: &Settings, opts: &VerifyOptions) -> Result<VerifyReport, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    let slack = 10.0 * settings.tol;
    let cmp = compare(p, env, settings, opts.margin)?;
    let mut pass = true;
    let mut o = settings.header("verify");
    let s = p.dvg.stats();
    let _ = writeln!(o, "spec: {}", tlvc_parser::print(&p.pred));
    let _ = writeln!(o, "normal form: {}", tlvc_parser::print(&p.spec.as_predicate()));
    let _ = writeln!(o, "env: {} ({} states)", env.name, env.mdp.state_count());
    let _ = writeln!(o, "dvg: nodes={} value_nodes={} sccs={} largest_loop={}", s.nodes, s.value_nodes(), s.sccs, s.largest_loop);
    let _ = writeln!(o, "margin: {}", opts.margin);
    for ((g, _), gap) in cmp.roots.iter().zip(&cmp.gaps) {
        let _ = writeln!(o, "gamma {g}: max |V - V*| = {gap:.9}");
    }
    let monotone = cmp.monotone(slack);
    let limit_ok = cmp.final_gap() <= LIMIT_GAP;
    pass &= monotone && limit_ok && cmp.disagreements.is_empty();
    let _ = writeln!(o, "bias non-increasing: {monotone}");
    let _ = writeln!(o, "final gap <= {LIMIT_GAP}: {limit_ok}");
    let _ = writeln!(o, "sign disagreements: {}", cmp.disagreements.len());
    for d in cmp.disagreements.iter().take(20) {
        let _ = writeln!(o, "  state {}: solver {:.6} oracle {:.6}", env.describe_state(d.state), d.solver, d.oracle);
    }

    if opts.samples > 0 {
        let eq = check_equivalence(&p.pred, &p.spec, opts.samples, &env.mdp, &env.reg, &mut rng)?;
        pass &= eq.ok();
        let _ = writeln!(o, "normalization: samples={} mismatches={}", eq.samples, eq.mismatches);
        for (k, (id, _, _)) in lemmas::catalogue().into_iter().enumerate() {
            let c = sample_identity(&id.lhs, &id.rhs, &env.mdp, opts.samples, &mut rng)?;
            pass &= c.mismatches == 0;
            let _ = writeln!(o, "lemma {k} {}: samples={} mismatches={}", id.name, c.samples, c.mismatches);
        }
    }
    if let Some(n) = opts.contraction {
        let bad = contraction_violations(&env.mdp, n, &mut rng);
        pass &= bad.iter().all(|&b| b == 0);
        let _ = writeln!(o, "contraction: samples={n} violations avoid={} reach-avoid={} loop={}", bad[0], bad[1], bad[2]);
    }
    if opts.permute_loops {
        let rotations = max_loops(p).max(1);
        let base = cmp.roots.last().expect("non-empty").1.clone();
        let mut worst: f64 = 0.0;
        for k in 1..rotations {
            let spec = p.spec.map_forms(&|f: &NormalForm| rotate_loops(f, k));
            let dvg = compile(&spec);
            let sol = solve(&dvg, &env.mdp, &env.reg, &settings.solve_config())?;
            worst = worst.max(sup_dist(sol.table(dvg.root), &base));
        }
        // Rotations agree only in the limit; at a finite discount the
        // hand-over order shifts values by O(1 - γ).
        let same = worst <= LIMIT_GAP;
        pass &= same;
        let _ = writeln!(o, "loop rotations: {rotations} max root difference {worst:.9} within {LIMIT_GAP}: {same}");
    }
    let _ = writeln!(o, "result: {}", if pass { "PASS" } else { "FAIL" });
    Ok(VerifyReport { text: o, pass, comparison: cmp })
}

pub fn cmd_verify(text: &str, env: &Env, settings: &Settings, opts: &VerifyOptions, out: Option<&Path>) -> Result<VerifyReport, CliError> {
    let p = crate::commands::pipeline(text)?;
    let report = verify(&p, env, settings, opts)?;
    if let Some(dir) = out {
        write(dir, "verify.txt", &report.text)?;
    }
    Ok(report)
}

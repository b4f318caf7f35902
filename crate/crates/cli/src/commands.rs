use std::fmt::Write as _;
use std::path::Path;

use tlvc_dvg::{compile, to_dot, to_json, Dvg};
use tlvc_logic::Predicate;
use tlvc_mdp::heatmap_csv;
use tlvc_policy::{rollout_csv, score_rollout};
use tlvc_rewrite::{normalize, NormalizedSpec};
use tlvc_solver::{solve, to_blob, to_csv, SolveConfig, Solution};

use crate::{CliError, Env};

/// Options shared by the solving commands.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub gamma_schedule: Vec<f64>,
    pub tol: f64,
    pub max_iters: Option<usize>,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        let d = SolveConfig::default();
        Settings { gamma_schedule: d.gamma_schedule, tol: d.tol, max_iters: d.max_iters, seed: 0 }
    }
}

impl Settings {
    pub fn solve_config(&self) -> SolveConfig {
        SolveConfig {
            gamma_schedule: self.gamma_schedule.clone(),
            tol: self.tol,
            max_iters: self.max_iters,
            warm_start: true,
        }
    }

    pub fn header(&self, cmd: &str) -> String {
        let g: Vec<String> = self.gamma_schedule.iter().map(f64::to_string).collect();
        format!("tlvc {cmd} seed={} gamma={} tol={:e}\n", self.seed, g.join(","), self.tol)
    }
}

/// Parsed, normalized and compiled spec.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub source: String,
    pub pred: Predicate,
    pub spec: NormalizedSpec,
    pub dvg: Dvg,
}

pub fn parse_source(text: &str) -> Result<Predicate, CliError> {
    tlvc_parser::parse_spec_file(text).map_err(|e| CliError::Parse { rendered: e.render(text) })
}

pub fn pipeline(text: &str) -> Result<Pipeline, CliError> {
    let pred = parse_source(text)?;
    let spec = normalize(&pred)?;
    let dvg = compile(&spec);
    dvg.validate().map_err(CliError::Internal)?;
    Ok(Pipeline { source: text.to_string(), pred, spec, dvg })
}

fn check_atoms(p: &Predicate, env: &Env) -> Result<(), CliError> {
    for a in p.atoms() {
        env.reg.resolve(&a)?;
    }
    Ok(())
}

pub(crate) fn write(dir: &Path, name: &str, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(CliError::io(path))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Ast,
    Normal,
}

pub fn cmd_parse(text: &str, emit: Emit, json: bool) -> Result<String, CliError> {
    let pred = parse_source(text)?;
    let json_out = |v: serde_json::Value| serde_json::to_string_pretty(&v).expect("serializable") + "\n";
    Ok(match emit {
        Emit::Ast if json => json_out(serde_json::to_value(&pred).expect("serializable")),
        Emit::Ast => tlvc_parser::print(&pred) + "\n",
        Emit::Normal => {
            let spec = normalize(&pred)?;
            let printed = tlvc_parser::print(&spec.as_predicate());
            if json {
                json_out(serde_json::json!({ "normalized": printed, "spec": spec }))
            } else {
                printed + "\n"
            }
        }
    })
}

pub fn cmd_compile(text: &str, env: Option<&Env>, out: &Path, dot: bool) -> Result<String, CliError> {
    let p = pipeline(text)?;
    if let Some(env) = env {
        check_atoms(&p.pred, env)?;
    }
    write(out, "dvg.json", to_json(&p.dvg))?;
    if dot {
        write(out, "dvg.dot", to_dot(&p.dvg))?;
    }
    let s = p.dvg.stats();
    let mut o = String::new();
    let _ = writeln!(o, "spec: {}", tlvc_parser::print(&p.pred));
    let _ = writeln!(o, "normal form: {}", tlvc_parser::print(&p.spec.as_predicate()));
    let _ = writeln!(
        o,
        "nodes: {}  edges: {}  sccs: {}  value nodes: {}",
        s.nodes,
        s.edges,
        s.sccs,
        s.value_nodes()
    );
    let _ = writeln!(
        o,
        "avoid: {}  reach-avoid: {}  loop: {}  max-combine: {}  one-step: {}  largest loop scc: {}",
        s.avoid, s.reach_avoid, s.reach_avoid_loop, s.max_combine, s.one_step, s.largest_loop
    );
    Ok(o)
}

pub fn solve_env(p: &Pipeline, env: &Env, settings: &Settings) -> Result<Solution<f64>, CliError> {
    check_atoms(&p.pred, env)?;
    let sol = solve(&p.dvg, &env.mdp, &env.reg, &settings.solve_config())?;
    log::debug!("solved {} nodes on {} at gamma {} (max residual {:e})", p.dvg.nodes.len(), env.name, sol.gamma, sol.max_residual());
    Ok(sol)
}

pub fn cmd_solve(text: &str, env: &Env, settings: &Settings, out: &Path) -> Result<String, CliError> {
    let p = pipeline(text)?;
    let sol = solve_env(&p, env, settings)?;
    write(out, "values.csv", to_csv(&sol))?;
    write(out, "values.bin", to_blob(&sol))?;
    if env.grid.is_some() {
        for (i, t) in sol.tables.iter().enumerate() {
            write(out, &format!("heatmap_n{i}.csv"), heatmap_csv(&env.mdp, t))?;
        }
        write(out, "heatmap_root.csv", heatmap_csv(&env.mdp, sol.table(p.dvg.root)))?;
    }
    let mut o = settings.header("solve");
    let _ = writeln!(o, "env: {} ({} states)", env.name, env.mdp.state_count());
    let _ = writeln!(o, "root: {}", p.dvg.root);
    for (i, n) in p.dvg.nodes.iter().enumerate() {
        let t = &sol.tables[i];
        let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(
            o,
            "{} {:?} iterations={} residual={:.3e} min={lo:.6} max={hi:.6}",
            n.id, n.kind, sol.iterations[i], sol.residuals[i]
        );
    }
    Ok(o)
}

pub fn cmd_rollout(text: &str, env: &Env, settings: &Settings, x0: usize, horizon: usize, out: &Path) -> Result<String, CliError> {
    if horizon == 0 {
        return Err(CliError::Usage("horizon must be at least 1".into()));
    }
    if x0 >= env.mdp.state_count() {
        return Err(CliError::Usage(format!("start state {x0} is out of range")));
    }
    let p = pipeline(text)?;
    let sol = solve_env(&p, env, settings)?;
    let run = score_rollout(x0, &sol, &p.dvg, &env.mdp, &env.reg, &p.pred, horizon)?;
    write(out, "trace.csv", rollout_csv(&run.rows, &env.mdp))?;
    let mut o = settings.header("rollout");
    let _ = writeln!(o, "start: {}", env.describe_state(x0));
    let _ = writeln!(o, "trace: {}", describe_trace(&run.trace));
    let _ = writeln!(o, "value: {:.6}", sol.value(p.dvg.root, x0));
    let _ = writeln!(o, "robustness: {:.6}", run.robustness);
    let _ = writeln!(o, "satisfied: {}", run.robustness > 0.0);
    Ok(o)
}

pub fn describe_trace(t: &tlvc_logic::Trace) -> String {
    let list = |s: &[usize]| s.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    match t {
        tlvc_logic::Trace::Lasso { prefix, cycle } => format!("lasso [{}] ([{}])^w", list(prefix), list(cycle)),
        tlvc_logic::Trace::Finite(s) => format!("finite [{}]", list(s)),
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tlvc_cli::{cmd_compile, cmd_parse, cmd_rollout, cmd_solve, cmd_verify, CliError, Emit, Env, Settings, VerifyOptions};

/// Temporal-logic value decomposition: parse, compile, solve, roll out and
/// verify specs on tabular environments.
#[derive(Parser)]
#[command(name = "tlvc", version)]
struct Cli {
    /// Environment: a grid TOML file, `builtin:canoe` or `builtin:two-cycle`.
    #[arg(long, global = true)]
    env: Option<String>,
    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Ascending discount schedule, comma separated.
    #[arg(long, global = true, value_delimiter = ',', default_value = "0.9,0.99,0.999")]
    gamma: Vec<f64>,
    /// Sup-norm convergence tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Iteration cap per node; defaults to a bound derived from gamma and tol.
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    /// Worker threads for solver and oracle sweeps.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SpecArg {
    /// Spec file.
    #[arg(required_unless_present = "expr")]
    spec: Option<PathBuf>,
    /// Inline spec text instead of a file.
    #[arg(short = 'e', long, conflicts_with = "spec")]
    expr: Option<String>,
}

impl SpecArg {
    fn text(&self) -> Result<String, CliError> {
        match (&self.expr, &self.spec) {
            (Some(e), _) => Ok(e.clone()),
            (None, Some(p)) => fs::read_to_string(p).map_err(CliError::io(p)),
            (None, None) => Err(CliError::Usage("a spec file or --expr is required".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Ast,
    Normal,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a spec and print its AST or normal form.
    Parse {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, value_enum, default_value = "ast")]
        emit: EmitArg,
        /// Shorthand for `--emit normal`.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compile to a value graph; writes dvg.json.
    Compile {
        #[command(flatten)]
        spec: SpecArg,
        /// Also write dvg.dot.
        #[arg(long)]
        dot: bool,
    },
    /// Solve every value node; writes value tables and heatmaps.
    Solve {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Roll out the switching policy and score the trace.
    Rollout {
        #[command(flatten)]
        spec: SpecArg,
        /// Start state: an index or `row,col`.
        #[arg(long, default_value = "0")]
        x0: String,
        #[arg(long, default_value_t = 200)]
        horizon: usize,
    },
    /// Compare solver and oracle and run the self-tests.
    Verify {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
        /// Random lassos per rewrite check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Run the contraction self-test with this many pairs per operator.
        #[arg(long)]
        contraction: Option<usize>,
        /// Re-solve under every rotation of the loop order.
        #[arg(long)]
        permute_loops: bool,
    },
}

fn env_of(cli: &Cli) -> Result<Env, CliError> {
    let spec = cli.env.as_deref().ok_or_else(|| CliError::Usage("--env is required".into()))?;
    Env::load(spec)
}

fn run(cli: &Cli) -> Result<String, CliError> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let settings = Settings { gamma_schedule: cli.gamma.clone(), tol: cli.tol, max_iters: cli.max_iters, seed: cli.seed };
    settings.solve_config().validate()?;
    let out: &Path = &cli.out;
    match &cli.cmd {
        Cmd::Parse { spec, emit, normalize, json } => {
            let emit = match (normalize, emit) {
                (true, _) | (_, EmitArg::Normal) => Emit::Normal,
                _ => Emit::Ast,
            };
            cmd_parse(&spec.text()?, emit, *json)
        }
        Cmd::Compile { spec, dot } => {
            let env = cli.env.as_ref().map(|_| env_of(cli)).transpose()?;
            cmd_compile(&spec.text()?, env.as_ref(), out, *dot)
        }
        Cmd::Solve { spec } => cmd_solve(&spec.text()?, &env_of(cli)?, &settings, out),
        Cmd::Rollout { spec, x0, horizon } => {
            let env = env_of(cli)?;
            let x0 = env.state(x0)?;
            cmd_rollout(&spec.text()?, &env, &settings, x0, *horizon, out)
        }
        Cmd::Verify { spec, margin, samples, contraction, permute_loops } => {
            let opts = VerifyOptions { margin: *margin, samples: *samples, contraction: *contraction, permute_loops: *permute_loops };
            let report = cmd_verify(&spec.text()?, &env_of(cli)?, &settings, &opts, Some(out))?;
            if report.pass {
                Ok(report.text)
            } else {
                print!("{}", report.text);
                Err(CliError::VerifyFailed)
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TLVC_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            match &e {
                CliError::Parse { .. } => eprintln!("{e}"),
                _ => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

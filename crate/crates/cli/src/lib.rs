//! Library side of the `tlvc` command: each subcommand is a function that
//! returns its report text and writes its artifacts under an output
//! directory.

mod commands;
mod env;
mod error;
pub mod suite;
pub mod verify;

pub use commands::{
    cmd_compile, cmd_parse, cmd_rollout, cmd_solve, describe_trace, parse_source, pipeline, solve_env, Emit, Pipeline,
    Settings,
};
pub use env::Env;
pub use error::CliError;
pub use verify::{cmd_verify, VerifyOptions, VerifyReport};

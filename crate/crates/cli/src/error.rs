use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{rendered}")]
    Parse { rendered: String },
    #[error("FragmentError({reason:?}): {message}")]
    Fragment { reason: tlvc_rewrite::FragmentReason, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("environment: {0}")]
    Env(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Logic(#[from] tlvc_logic::LogicError),
    #[error(transparent)]
    Oracle(#[from] tlvc_oracle::OracleError),
    #[error("solver: {0}")]
    Solve(#[from] tlvc_solver::SolveError),
    #[error("policy: {0}")]
    Policy(#[from] tlvc_policy::PolicyError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    /// 1 for user or spec errors, 2 for broken internal invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solve(tlvc_solver::SolveError::NoConvergence { .. } | tlvc_solver::SolveError::Malformed { .. })
            | CliError::Internal(_) => 2,
            _ => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl From<tlvc_rewrite::FragmentError> for CliError {
    fn from(e: tlvc_rewrite::FragmentError) -> Self {
        CliError::Fragment { reason: e.reason, message: e.to_string() }
    }
}

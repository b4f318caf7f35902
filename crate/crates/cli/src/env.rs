use std::path::Path;

use tlvc_logic::Registry;
use tlvc_mdp::{build_grid, instances, GridSpec, Mdp};

use crate::CliError;

/// A loaded environment: an MDP with its atom registry.
#[derive(Clone, Debug)]
pub struct Env {
    pub name: String,
    pub mdp: Mdp,
    pub reg: Registry<f64>,
    pub grid: Option<GridSpec>,
}

impl Env {
    pub fn from_grid(name: &str, grid: GridSpec) -> Result<Env, CliError> {
        let (mdp, reg) = build_grid(&grid).map_err(|e| CliError::Env(e.to_string()))?;
        Ok(Env { name: name.to_string(), mdp, reg, grid: Some(grid) })
    }

    /// `builtin:canoe` and `builtin:two-cycle` name the bundled instances;
    /// anything else is a grid TOML file.
    pub fn load(spec: &str) -> Result<Env, CliError> {
        match spec {
            "builtin:canoe" => {
                let (mdp, reg) = instances::canoe();
                Ok(Env { name: spec.into(), mdp, reg, grid: None })
            }
            "builtin:two-cycle" => {
                let reg = Registry::new(2, 1.0).with("r", vec![-0.5, 0.7])?;
                Ok(Env { name: spec.into(), mdp: instances::two_cycle(), reg, grid: None })
            }
            s if s.starts_with("builtin:") => Err(CliError::Env(format!("unknown builtin environment {s}"))),
            path => {
                let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
                let grid = GridSpec::from_toml(&text).map_err(|e| CliError::Env(format!("{path}: {e}")))?;
                Env::from_grid(&Path::new(path).display().to_string(), grid)
            }
        }
    }

    /// State index from `N` or `row,col`.
    pub fn state(&self, text: &str) -> Result<usize, CliError> {
        let bad = || CliError::Usage(format!("start state {text} is out of range"));
        let x = match text.split_once(',') {
            Some((r, c)) => {
                let r: usize = r.trim().parse().map_err(|_| bad())?;
                let c: usize = c.trim().parse().map_err(|_| bad())?;
                self.mdp.coords().and_then(|cs| cs.iter().position(|&p| p == (r, c))).ok_or_else(bad)?
            }
            None => text.trim().parse().map_err(|_| bad())?,
        };
        if x >= self.mdp.state_count() {
            return Err(bad());
        }
        Ok(x)
    }

    pub fn describe_state(&self, x: usize) -> String {
        match self.mdp.coords() {
            Some(c) => format!("{x} ({},{})", c[x].0, c[x].1),
            None => x.to_string(),
        }
    }
}

//! Scenario runner behind the command-line tool: config in, `report.json`,
//! `sweep.csv` and `sweep.svg` out.

pub mod config;
pub mod scenario;
pub mod svg;
pub mod sweep;

use std::path::{Path, PathBuf};

pub use config::{Analysis, ConfigError, EtaSpec, Overrides, ScenarioConfig, Settings, StructureChoice};
pub use scenario::{run_scenario, GridCheck, MonteCarloCheck, PointRecord, Report};
pub use sweep::{spot_check, sweep_rows, write_csv, SweepRow, CSV_HEADER};

use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Sweep,
    Dynamics,
    Oracle,
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    AnalysisFailure = 1,
    ConfigError = 2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    /// Files written, in order.
    pub written: Vec<PathBuf>,
    pub message: Option<String>,
}

impl Outcome {
    fn config(e: ConfigError) -> Self {
        Outcome {
            status: Status::ConfigError,
            written: Vec::new(),
            message: Some(e.to_string()),
        }
    }
}

/// The analyses a subcommand runs for a given config.
pub fn effective_analyses(command: Command, cfg: &ScenarioConfig) -> Vec<Analysis> {
    let requested = &cfg.analyses;
    let mut set = match command {
        Command::Analyze | Command::Sweep => return requested.clone(),
        Command::Dynamics => vec![Analysis::ClosedForm, Analysis::Dynamics],
        Command::Oracle => vec![Analysis::ClosedForm, Analysis::Oracle],
    };
    if command == Command::Oracle && requested.contains(&Analysis::MonteCarlo) {
        set.push(Analysis::MonteCarlo);
    }
    set
}

fn write(path: PathBuf, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<(), String> {
    std::fs::write(&path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    written.push(path);
    Ok(())
}

/// Loads the config, applies overrides, runs the subcommand and writes its
/// outputs under `out` (or the config's `output_dir`).
pub fn run(exec: Execution, command: Command, config: &Path, out: Option<&Path>, overrides: Overrides) -> Outcome {
    let mut cfg = match ScenarioConfig::load(config) {
        Ok(c) => c,
        Err(e) => return Outcome::config(e),
    };
    cfg.apply(overrides);
    let analyses = effective_analyses(command, &cfg);
    if let Err(e) = cfg.require(&analyses) {
        return Outcome::config(e);
    }
    let Some(dir) = out.map(Path::to_path_buf).or_else(|| cfg.output_dir.clone()) else {
        return Outcome::config(ConfigError {
            line: 1,
            message: "no output directory: pass --out or set output_dir".into(),
        });
    };
    let mut written = Vec::new();
    let result = std::fs::create_dir_all(&dir)
        .map_err(|e| format!("cannot create {}: {e}", dir.display()))
        .and_then(|()| match command {
            Command::Sweep => run_sweep_into(exec, &cfg, &dir, &mut written),
            _ => {
                let report = run_scenario(exec, &cfg, &analyses);
                let json = serde_json::to_vec_pretty(&report).map_err(|e| e.to_string())?;
                write(dir.join("report.json"), &json, &mut written)?;
                report.error.map_or(Ok(()), Err)
            }
        });
    match result {
        Ok(()) => Outcome {
            status: Status::Success,
            written,
            message: None,
        },
        Err(m) => Outcome {
            status: Status::AnalysisFailure,
            written,
            message: Some(m),
        },
    }
}

/// Writes `sweep.csv` and `sweep.svg`, then spot-checks the rows; files
/// stay on disk when the check fails.
fn run_sweep_into(exec: Execution, cfg: &ScenarioConfig, dir: &Path, written: &mut Vec<PathBuf>) -> Result<(), String> {
    let rows = sweep_rows(exec, cfg).map_err(|e| e.to_string())?;
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv).map_err(|e| e.to_string())?;
    write(dir.join("sweep.csv"), &csv, written)?;
    write(dir.join("sweep.svg"), svg::render(&rows).as_bytes(), written)?;
    spot_check(&rows, cfg).map_err(|e| e.to_string())?;
    Ok(())
}

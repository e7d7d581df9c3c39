//! JSON scenario configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::closed_form::core_size;
use crate::equilibrium::Schedule;
use crate::model::CommunityParams;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error at line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureChoice {
    Celebrity,
    Uniform,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    ClosedForm,
    NashCheck,
    Dynamics,
    Oracle,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EtaSpec {
    Single(f64),
    Sweep { start: f64, stop: f64, step: f64 },
}

impl EtaSpec {
    /// Sweep points as integer multiples of the step from `start`, rounded
    /// to 12 decimals.
    pub fn points(&self) -> Vec<f64> {
        match *self {
            EtaSpec::Single(eta) => vec![eta],
            EtaSpec::Sweep { start, stop, step } => {
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                (0..count)
                    .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleChoice {
    RoundRobin,
    Random,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub grid_points: Option<usize>,
    pub eps: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub grid_step: Option<f64>,
    pub max_iters: Option<usize>,
    #[serde(default)]
    pub symmetric_by_role: bool,
    pub initial_alpha: Option<f64>,
    pub schedule: Option<ScheduleChoice>,
}

/// Command-line overrides applied on top of the file's settings.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub eps: Option<f64>,
    pub grid_points: Option<usize>,
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    params: CommunityParams,
    structure: StructureChoice,
    eta: EtaSpec,
    analyses: Vec<Analysis>,
    #[serde(default)]
    settings: Settings,
    #[serde(default)]
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub params: CommunityParams,
    pub structure: StructureChoice,
    pub eta: EtaSpec,
    pub analyses: Vec<Analysis>,
    pub settings: Settings,
    pub output_dir: Option<PathBuf>,
    #[serde(skip)]
    source: String,
}

/// 1-based line of the first occurrence of `"key"`, or 1.
fn line_of(source: &str, key: &str) -> usize {
    let quoted = format!("\"{key}\"");
    source
        .lines()
        .position(|l| l.contains(&quoted))
        .map_or(1, |i| i + 1)
}

impl ScenarioConfig {
    pub fn parse(source: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = serde_json::from_str(source).map_err(|e| ConfigError {
            line: e.line().max(1),
            message: e.to_string(),
        })?;
        let cfg = ScenarioConfig {
            params: raw.params,
            structure: raw.structure,
            eta: raw.eta,
            analyses: raw.analyses,
            settings: raw.settings,
            output_dir: raw.output_dir,
            source: source.to_owned(),
        };
        cfg.check_static()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: 1,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    fn err(&self, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: line_of(&self.source, key),
            message: message.into(),
        }
    }

    fn check_static(&self) -> Result<(), ConfigError> {
        self.params
            .validate()
            .map_err(|e| self.err("params", e.to_string()))?;
        if let EtaSpec::Sweep { start, stop, step } = self.eta {
            if step.is_nan() || step <= 0.0 {
                return Err(self.err("step", format!("sweep step must be positive, got {step}")));
            }
            if start.is_nan() || stop.is_nan() || start > stop {
                return Err(self.err("start", format!("sweep start {start} exceeds stop {stop}")));
            }
        }
        for eta in self.eta.points() {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(self.err("eta", format!("eta = {eta} is outside (0, 1]")));
            }
            if core_size(self.params.n, eta) < 1 {
                return Err(self.err("eta", format!("eta = {eta} leaves no celebrities or follows at n = {}", self.params.n)));
            }
        }
        Ok(())
    }

    pub fn apply(&mut self, o: Overrides) {
        let s = &mut self.settings;
        s.seed = o.seed.or(s.seed);
        s.eps = o.eps.or(s.eps);
        s.grid_points = o.grid_points.or(s.grid_points);
        s.trials = o.trials.or(s.trials);
    }

    /// Checks that every setting the given analyses need is present and
    /// in range.
    pub fn require(&self, analyses: &[Analysis]) -> Result<(), ConfigError> {
        if analyses.is_empty() {
            return Err(self.err("analyses", "no analyses requested"));
        }
        let s = &self.settings;
        let missing = |name: &str, what: &str| self.err("settings", format!("{what} needs settings.{name}"));
        for a in analyses {
            match a {
                Analysis::ClosedForm => {}
                Analysis::NashCheck | Analysis::Dynamics => {
                    let what = if *a == Analysis::NashCheck { "nash_check" } else { "dynamics" };
                    match s.grid_points {
                        None => return Err(missing("grid_points", what)),
                        Some(g) if g < 2 => return Err(self.err("grid_points", "grid_points must be at least 2")),
                        _ => {}
                    }
                    match s.eps {
                        None => return Err(missing("eps", what)),
                        Some(e) if e.is_nan() || e < 0.0 => return Err(self.err("eps", "eps must be non-negative")),
                        _ => {}
                    }
                    if *a == Analysis::Dynamics {
                        match s.max_iters {
                            None => return Err(missing("max_iters", what)),
                            Some(0) => return Err(self.err("max_iters", "max_iters must be at least 1")),
                            _ => {}
                        }
                        match s.initial_alpha {
                            None => return Err(missing("initial_alpha", what)),
                            Some(a) if !(0.0..=1.0).contains(&a) => {
                                return Err(self.err("initial_alpha", "initial_alpha must lie in [0, 1]"))
                            }
                            _ => {}
                        }
                        match s.schedule {
                            None => return Err(missing("schedule", what)),
                            Some(ScheduleChoice::Random) if s.seed.is_none() => {
                                return Err(missing("seed", "random schedule"))
                            }
                            _ => {}
                        }
                    }
                }
                Analysis::Oracle => match s.grid_step {
                    None => return Err(missing("grid_step", "oracle")),
                    Some(g) if !(g > 0.0 && g <= 1.0) => return Err(self.err("grid_step", "grid_step must lie in (0, 1]")),
                    _ => {}
                },
                Analysis::MonteCarlo => {
                    match s.trials {
                        None => return Err(missing("trials", "monte_carlo")),
                        Some(0) => return Err(self.err("trials", "trials must be at least 1")),
                        _ => {}
                    }
                    if s.seed.is_none() {
                        return Err(missing("seed", "monte_carlo"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn schedule(&self) -> Schedule {
        match self.settings.schedule {
            Some(ScheduleChoice::Random) => Schedule::Random {
                seed: self.settings.seed.unwrap_or(0),
            },
            _ => Schedule::RoundRobin,
        }
    }
}

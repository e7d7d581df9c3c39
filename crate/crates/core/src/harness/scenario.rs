use serde::Serialize;

use super::config::{Analysis, ScenarioConfig, StructureChoice};
use crate::closed_form::{
    celebrity_optimum, classify_case, compare_structures, uniform_optimum, CaseLabel, ComparisonReport, Structure,
    StructureOptimum,
};
use crate::equilibrium::{best_response_dynamics, nash_gap_with, DynamicsTrace, EquilibriumReport};
use crate::error::Result;
use crate::exec::Execution;
use crate::model::{fluid_rewards, CommunityParams, StrategyProfile};
use crate::oracle::{grid_search_welfare_with, lipschitz_slack, monte_carlo_rewards_with, GridSearchResult, MonteCarloEstimate};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCheck {
    pub result: GridSearchResult,
    pub closed_form_g_max: f64,
    pub slack: f64,
    /// best_welfare <= g_max + slack and best_welfare >= g_max - slack.
    pub within_slack: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloCheck {
    pub estimate: MonteCarloEstimate,
    pub fluid_welfare: f64,
    /// (mean - fluid) / standard error; zero when both agree exactly.
    pub z_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointRecord {
    pub eta: f64,
    pub structure: Structure,
    /// eta * n is an integer, so graph-based analyses ran.
    pub integral: bool,
    pub case: CaseLabel,
    pub optimum: StructureOptimum,
    pub comparison: Option<ComparisonReport>,
    pub equilibrium: Option<EquilibriumReport>,
    pub dynamics: Option<DynamicsTrace>,
    pub grid_search: Option<GridCheck>,
    pub monte_carlo: Option<MonteCarloCheck>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub params: CommunityParams,
    pub structure: StructureChoice,
    pub analyses: Vec<Analysis>,
    pub points: Vec<PointRecord>,
    /// Set when an analysis failed; `points` then holds the records
    /// completed before the failing point.
    pub error: Option<String>,
}

pub fn structures(choice: StructureChoice) -> &'static [Structure] {
    match choice {
        StructureChoice::Celebrity => &[Structure::Celebrity],
        StructureChoice::Uniform => &[Structure::Uniform],
        StructureChoice::Both => &[Structure::Celebrity, Structure::Uniform],
    }
}

pub fn optimum(structure: Structure, params: &CommunityParams, eta: f64) -> Result<StructureOptimum> {
    match structure {
        Structure::Celebrity => celebrity_optimum(params, eta),
        Structure::Uniform => uniform_optimum(params, eta),
    }
}

fn setting<T>(v: Option<T>) -> T {
    v.expect("validated by ScenarioConfig::require")
}

fn analyse_point(
    exec: Execution,
    cfg: &ScenarioConfig,
    analyses: &[Analysis],
    structure: Structure,
    eta: f64,
) -> Result<PointRecord> {
    let params = &cfg.params;
    let s = &cfg.settings;
    let opt = optimum(structure, params, eta)?;
    let integral = opt.is_integral();
    let mut rec = PointRecord {
        eta,
        structure,
        integral,
        case: classify_case(params, eta)?,
        comparison: (cfg.structure == StructureChoice::Both).then(|| compare_structures(params, eta)).transpose()?,
        optimum: opt,
        equilibrium: None,
        dynamics: None,
        grid_search: None,
        monte_carlo: None,
        notes: Vec::new(),
    };
    let graph_based = analyses.iter().any(|a| *a != Analysis::ClosedForm);
    if graph_based && !integral {
        rec.notes.push(format!(
            "eta * n = {} is not an integer; graph-based analyses skipped",
            eta * params.n as f64
        ));
        return Ok(rec);
    }
    let graph = structure.graph(params.n, eta)?;
    for a in analyses {
        match a {
            Analysis::ClosedForm => {}
            Analysis::NashCheck => {
                rec.equilibrium = Some(nash_gap_with(
                    exec,
                    &graph,
                    params,
                    &rec.optimum.profile,
                    setting(s.grid_points),
                    setting(s.eps),
                )?);
            }
            Analysis::Dynamics => {
                let initial = StrategyProfile::uniform(params.n, setting(s.initial_alpha))?;
                rec.dynamics = Some(best_response_dynamics(
                    &graph,
                    params,
                    &initial,
                    cfg.schedule(),
                    setting(s.max_iters),
                    setting(s.eps),
                    setting(s.grid_points),
                )?);
            }
            Analysis::Oracle => {
                let step = setting(s.grid_step);
                let result = grid_search_welfare_with(exec, &graph, params, step, s.symmetric_by_role)?;
                let slack = lipschitz_slack(&graph, params, step);
                let g = rec.optimum.g_max;
                let tol = 1e-9 * g.abs().max(1.0);
                rec.grid_search = Some(GridCheck {
                    within_slack: result.best_welfare <= g + tol && result.best_welfare >= g - slack - tol,
                    result,
                    closed_form_g_max: g,
                    slack,
                });
            }
            Analysis::MonteCarlo => {
                let estimate = monte_carlo_rewards_with(
                    exec,
                    &graph,
                    params,
                    &rec.optimum.profile,
                    setting(s.trials),
                    setting(s.seed),
                )?;
                let fluid = fluid_rewards(&graph, params, &rec.optimum.profile)?.welfare;
                let diff = estimate.mean_welfare - fluid;
                let z_score = if estimate.standard_error > 0.0 {
                    diff / estimate.standard_error
                } else if diff.abs() <= 1e-9 * fluid.abs().max(1.0) {
                    0.0
                } else {
                    diff.signum() * f64::INFINITY
                };
                rec.monte_carlo = Some(MonteCarloCheck {
                    estimate,
                    fluid_welfare: fluid,
                    z_score,
                });
            }
        }
    }
    Ok(rec)
}

/// Runs the analyses at every (structure, eta) point of the scenario.
/// Points are independent and may run in parallel; records come back in
/// eta order.
pub fn run_scenario(exec: Execution, cfg: &ScenarioConfig, analyses: &[Analysis]) -> Report {
    let etas = cfg.eta.points();
    let structs = structures(cfg.structure);
    let jobs: Vec<(f64, Structure)> = etas
        .iter()
        .flat_map(|&eta| structs.iter().map(move |&s| (eta, s)))
        .collect();
    let results = exec.map_indexed(jobs.len(), |k| {
        let (eta, s) = jobs[k];
        analyse_point(exec, cfg, analyses, s, eta).map_err(|e| format!("eta = {eta}, {}: {e}", s.as_str()))
    });
    let mut points = Vec::with_capacity(results.len());
    let mut error = None;
    for r in results {
        match r {
            Ok(p) => points.push(p),
            Err(e) => {
                error = Some(e);
                break;
            }
        }
    }
    Report {
        params: cfg.params,
        structure: cfg.structure,
        analyses: analyses.to_vec(),
        points,
        error,
    }
}

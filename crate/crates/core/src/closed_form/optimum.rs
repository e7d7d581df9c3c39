use serde::{Deserialize, Serialize};

use super::{check_eta, classify_case, CaseId, CaseLabel, BOUNDARY_TOL};
use crate::error::{domain, Result};
use crate::model::{build_celebrity_graph, build_uniform_graph, CommunityParams, FollowGraph, StrategyProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    Celebrity,
    Uniform,
}

impl Structure {
    pub fn as_str(self) -> &'static str {
        match self {
            Structure::Celebrity => "celebrity",
            Structure::Uniform => "uniform",
        }
    }

    /// Discrete graph for this structure at `eta`, using `round(eta * n)`
    /// celebrities or follow degree.
    pub fn graph(self, n: usize, eta: f64) -> Result<FollowGraph> {
        let k = core_size(n, eta);
        match self {
            Structure::Celebrity => build_celebrity_graph(n, k),
            Structure::Uniform => build_uniform_graph(n, k),
        }
    }
}

/// `round(eta * n)`: celebrity count or uniform follow degree.
pub fn core_size(n: usize, eta: f64) -> usize {
    (eta * n as f64).round() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureOptimum {
    pub structure: Structure,
    pub eta: f64,
    /// Celebrity count or follow degree after rounding `eta * n`.
    pub core: usize,
    pub profile: StrategyProfile,
    /// Production fraction of celebrities (every member, for `Uniform`).
    pub alpha_core: f64,
    pub alpha_other: f64,
    pub g_max: f64,
    pub nash_predicted: bool,
    /// Celebrity structure only.
    pub case: Option<CaseLabel>,
    /// eta * n < N_c / N_p
    pub small_core_bound_holds: bool,
}

impl StructureOptimum {
    /// True when `eta * n` is an integer, so the discrete graph realises the
    /// closed form exactly.
    pub fn is_integral(&self) -> bool {
        let en = self.eta * self.profile.len() as f64;
        (en - en.round()).abs() <= 1e-9
    }
}

fn check_core(params: &CommunityParams, eta: f64) -> Result<usize> {
    check_eta(params, eta)?;
    let k = core_size(params.n, eta);
    if k < 1 {
        return Err(domain(format!(
            "eta * n = {} rounds to an empty core",
            eta * params.n as f64
        )));
    }
    Ok(k.min(params.n))
}

/// Production fraction at which the whole community's demand exactly meets
/// supply: N_c / (N_c + eta n N_p).
fn exact_supply_alpha(params: &CommunityParams, en: f64) -> f64 {
    if params.n_c == 0.0 {
        0.0
    } else {
        params.n_c / (params.n_c + en * params.n_p)
    }
}

/// Welfare-maximising profile for the celebrity-follower structure and the
/// closed-form verdict on whether it is a Nash equilibrium.
pub fn celebrity_optimum(params: &CommunityParams, eta: f64) -> Result<StructureOptimum> {
    let m = check_core(params, eta)?;
    let label = classify_case(params, eta)?;
    let n = params.n as f64;
    let en = eta * n;
    let r = params.reward_sum();
    let (alpha_core, g_max) = match label.regime {
        CaseId::Case1 => (1.0, eta * (1.0 - eta) * n * n * params.n_p * r),
        CaseId::Case2 | CaseId::Case4 => (
            exact_supply_alpha(params, en),
            eta * n * n * params.n_c * params.n_p * r / (params.n_c + en * params.n_p),
        ),
        CaseId::Case3 => (
            (params.n_c / (en * params.n_p)).min(1.0),
            params.n_c * (n - params.n_c / params.n_p) * r,
        ),
        CaseId::Boundary | CaseId::Uncovered => unreachable!("regime is always a numbered case"),
    };
    Ok(StructureOptimum {
        structure: Structure::Celebrity,
        eta,
        core: m,
        profile: StrategyProfile::core_periphery(params.n, m, alpha_core, 0.0)?,
        alpha_core,
        alpha_other: 0.0,
        g_max,
        nash_predicted: label.id == CaseId::Case1,
        case: Some(label),
        small_core_bound_holds: en < params.n_c / params.n_p,
    })
}

/// Welfare-maximising symmetric profile for the uniform structure and the
/// closed-form Nash condition `eta <= N_c r_c / (n N_p r_p) + 1/n`.
pub fn uniform_optimum(params: &CommunityParams, eta: f64) -> Result<StructureOptimum> {
    let d = check_core(params, eta)?;
    let n = params.n as f64;
    let en = eta * n;
    let alpha = exact_supply_alpha(params, en);
    let g_max = eta * n * n * params.n_p * params.n_c * params.reward_sum() / (params.n_c + en * params.n_p);
    let nash = eta <= params.reward_ratio() + 1.0 / n + BOUNDARY_TOL;
    Ok(StructureOptimum {
        structure: Structure::Uniform,
        eta,
        core: d,
        profile: StrategyProfile::uniform(params.n, alpha)?,
        alpha_core: alpha,
        alpha_other: alpha,
        g_max,
        nash_predicted: nash,
        case: None,
        small_core_bound_holds: en < params.n_c / params.n_p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(n: usize, n_p: f64, n_c: f64, r_p: f64, r_c: f64) -> CommunityParams {
        CommunityParams::new(n, n_p, n_c, r_p, r_c).unwrap()
    }

    #[test]
    fn celebrity_case1() {
        let o = celebrity_optimum(&p(100, 10.0, 100.0, 1.0, 1.0), 0.05).unwrap();
        assert_eq!(o.core, 5);
        assert_eq!((o.alpha_core, o.alpha_other), (1.0, 0.0));
        // 5 celebrities x 10 items, each seen and consumed by 95 others.
        assert_relative_eq!(o.g_max, 9500.0, max_relative = 1e-12);
        assert!(o.nash_predicted);
        assert!(o.small_core_bound_holds);
    }

    #[test]
    fn celebrity_case2() {
        let o = celebrity_optimum(&p(10, 10.0, 60.0, 1.0, 1.0), 0.5).unwrap();
        assert_relative_eq!(o.alpha_core, 6.0 / 11.0, max_relative = 1e-14);
        assert_relative_eq!(o.g_max, 60000.0 / 110.0, max_relative = 1e-12);
        assert!(!o.nash_predicted);
    }

    #[test]
    fn celebrity_case3() {
        let o = celebrity_optimum(&p(100, 10.0, 100.0, 1.0, 1.0), 0.5).unwrap();
        assert_relative_eq!(o.alpha_core, 0.2, max_relative = 1e-14);
        assert_relative_eq!(o.g_max, 18000.0, max_relative = 1e-12);
        assert!(!o.nash_predicted);
        assert!(!o.small_core_bound_holds);
    }

    #[test]
    fn uniform_examples() {
        let o = uniform_optimum(&p(2, 1.0, 1.0, 1.0, 1.0), 1.0).unwrap();
        assert_relative_eq!(o.alpha_core, 1.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(o.g_max, 8.0 / 3.0, max_relative = 1e-14);
        assert!(o.nash_predicted);

        let o = uniform_optimum(&p(100, 10.0, 100.0, 1.0, 1.0), 0.05).unwrap();
        assert_relative_eq!(o.alpha_core, 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(o.g_max, 1_000_000.0 / 150.0, max_relative = 1e-12);
        assert!(o.nash_predicted);

        let o = uniform_optimum(&p(100, 10.0, 10.0, 10.0, 1.0), 0.5).unwrap();
        assert!(!o.nash_predicted);
    }

    #[test]
    fn empty_core_rejected() {
        assert!(celebrity_optimum(&p(10, 1.0, 5.0, 1.0, 1.0), 0.04).is_err());
        assert!(uniform_optimum(&p(10, 1.0, 5.0, 1.0, 1.0), 0.04).is_err());
        assert!(celebrity_optimum(&p(10, 1.0, 5.0, 1.0, 1.0), 0.05).is_ok());
    }

    #[test]
    fn zero_consumption_capacity() {
        let o = celebrity_optimum(&p(4, 1.0, 0.0, 1.0, 1.0), 0.5).unwrap();
        assert_eq!(o.g_max, 0.0);
        let o = uniform_optimum(&p(4, 1.0, 0.0, 1.0, 1.0), 0.5).unwrap();
        assert_eq!((o.g_max, o.alpha_core), (0.0, 0.0));
    }
}

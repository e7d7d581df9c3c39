use serde::{Deserialize, Serialize};

use super::{classify_case, uniform_optimum, CaseId, CaseLabel};
use crate::error::Result;
use crate::model::CommunityParams;

/// Celebrity-versus-uniform welfare at the same edge budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub eta: f64,
    /// eta (1 - eta) n^2 N_p (r_p + r_c): welfare of the stable small-core
    /// profile (celebrities produce full time, everyone else consumes).
    pub g_max_celebrity: f64,
    pub g_max_uniform: f64,
    pub inequality_holds: bool,
    pub celebrity_case: CaseLabel,
    pub in_stable_regime: bool,
}

pub fn small_core_welfare(params: &CommunityParams, eta: f64) -> f64 {
    let n = params.n as f64;
    eta * (1.0 - eta) * n * n * params.n_p * params.reward_sum()
}

/// Evaluates the comparison at one point; the inequality is computed, not
/// assumed.
pub fn compare_structures(params: &CommunityParams, eta: f64) -> Result<ComparisonReport> {
    let uniform = uniform_optimum(params, eta)?;
    let case = classify_case(params, eta)?;
    let g_c = small_core_welfare(params, eta);
    let g_u = uniform.g_max;
    Ok(ComparisonReport {
        eta,
        g_max_celebrity: g_c,
        g_max_uniform: g_u,
        inequality_holds: g_c >= g_u - 1e-12 * g_u.abs().max(1.0),
        celebrity_case: case,
        in_stable_regime: case.id == CaseId::Case1,
    })
}

use serde::{Deserialize, Serialize};

use super::{celebrity_optimum, check_eta, CaseId, Structure};
use crate::error::{domain, Result};
use crate::model::CommunityParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Celebrity,
    NonCelebrity,
    UniformMember,
}

/// Closed-form change in a member's reward when it moves unilaterally from
/// `at_alpha` to `at_alpha + delta` while everyone else stays at the
/// structure's optimal profile.
///
/// For celebrities the change is linear in `delta`,
/// `delta * (N_p * audience * r_p - N_c * r_c)`, where `audience` is the
/// number of consumptions an extra item earns in the current welfare
/// regime: `(1 - eta) n` in Case 1, `n` in Cases 2 and 4, and
/// `(1 - eta) n + eta n (1 - alpha_h)` in Case 3. Non-celebrities only
/// trade consumption time. Uniform members use the exact selection
/// probability `eta alpha n / (eta alpha n + delta)` for upward moves and
/// `delta N_p (eta n r_p + r_c)` for downward moves.
pub fn deviation_delta(
    structure: Structure,
    params: &CommunityParams,
    eta: f64,
    role: Role,
    at_alpha: f64,
    delta: f64,
) -> Result<f64> {
    check_eta(params, eta)?;
    let target = at_alpha + delta;
    if !(0.0..=1.0).contains(&at_alpha) || !(-1e-12..=1.0 + 1e-12).contains(&target) {
        return Err(domain(format!(
            "deviation from {at_alpha} by {delta} leaves [0, 1]"
        )));
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let n = params.n as f64;
    let en = eta * n;
    match (structure, role) {
        (Structure::Uniform, Role::UniformMember) => {
            let (a, np) = (at_alpha, params.n_p);
            if delta > 0.0 {
                let pick = if a > 0.0 { en * a / (en * a + delta) } else { 0.0 };
                Ok((a + delta) * en * pick * np * params.r_p - en * a * np * params.r_p - delta * params.n_c * params.r_c)
            } else {
                Ok(delta * np * (en * params.r_p + params.r_c))
            }
        }
        (Structure::Celebrity, Role::Celebrity) => {
            let label = celebrity_optimum(params, eta)?.case.expect("celebrity label");
            let audience = match label.regime {
                CaseId::Case1 => (1.0 - eta) * n,
                CaseId::Case2 | CaseId::Case4 => n,
                CaseId::Case3 => (1.0 - eta) * n + en * (1.0 - at_alpha),
                CaseId::Boundary | CaseId::Uncovered => unreachable!(),
            };
            Ok(delta * (params.n_p * audience * params.r_p - params.n_c * params.r_c))
        }
        (Structure::Celebrity, Role::NonCelebrity) => {
            let opt = celebrity_optimum(params, eta)?;
            let supply = en * opt.alpha_core * params.n_p;
            let eat = |a: f64| ((1.0 - a).max(0.0) * params.n_c).min(supply);
            Ok(params.r_c * (eat(target) - eat(at_alpha)))
        }
        (s, r) => Err(domain(format!("role {r:?} does not exist in the {} structure", s.as_str()))),
    }
}

//! Best responses, epsilon-Nash gaps and best-response dynamics under the
//! fluid reward model.
//!
//! A member's reward is evaluated with everyone else's strategy fixed but
//! their consumption allowed to react: when a member produces more, its
//! followers' selection rates `C_f / K_f` drop accordingly.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exec::Execution;
use crate::model::{fluid_rewards, CommunityParams, FollowGraph, StrategyProfile};

/// Reward of one member as a function of its own production fraction.
struct MemberObjective<'a> {
    params: &'a CommunityParams,
    /// Items visible to the member from producers other than itself.
    base_self: f64,
    follows_self: bool,
    /// For each follower other than the member: (items visible from other
    /// producers, consumption demand).
    others: Vec<(f64, f64)>,
}

impl<'a> MemberObjective<'a> {
    fn new(graph: &FollowGraph, params: &'a CommunityParams, alpha: &[f64], i: usize) -> Self {
        let visible_without_i = |f: usize| -> f64 {
            graph
                .follows(f)
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| alpha[j] * params.n_p)
                .sum()
        };
        let others = graph
            .followers(i)
            .iter()
            .filter(|&&f| f != i)
            .map(|&f| (visible_without_i(f), (1.0 - alpha[f]) * params.n_c))
            .collect();
        MemberObjective {
            params,
            base_self: visible_without_i(i),
            follows_self: graph.follows_self(i),
            others,
        }
    }

    fn reward(&self, a: f64) -> f64 {
        let p = self.params;
        let produced = a * p.n_p;
        let own_visible = self.base_self + if self.follows_self { produced } else { 0.0 };
        let own_consumed = if own_visible > 0.0 {
            ((1.0 - a) * p.n_c).min(own_visible)
        } else {
            0.0
        };
        let mut consumers = 0.0;
        if produced > 0.0 {
            if self.follows_self {
                consumers += own_consumed / own_visible;
            }
            for &(base, demand) in &self.others {
                let k = base + produced;
                consumers += demand.min(k) / k;
            }
        }
        p.r_p * produced * consumers + p.r_c * own_consumed
    }

    /// Production fractions where the member or one of its followers
    /// switches between under- and over-supply.
    fn breakpoints(&self) -> Vec<f64> {
        let p = self.params;
        let mut out = Vec::new();
        if p.n_c > 0.0 {
            out.push(if self.follows_self {
                (p.n_c - self.base_self) / (p.n_c + p.n_p)
            } else {
                1.0 - self.base_self / p.n_c
            });
        }
        out.extend(self.others.iter().map(|&(base, demand)| (demand - base) / p.n_p));
        out.retain(|a| (0.0..=1.0).contains(a));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub alpha: f64,
    pub reward: f64,
    /// Reward at the member's current strategy.
    pub current_reward: f64,
}

fn check_inputs(graph: &FollowGraph, params: &CommunityParams, profile: &StrategyProfile, grid_points: usize) -> Result<()> {
    if graph.n() != params.n || profile.len() != params.n {
        return Err(domain("dimension mismatch between graph, params and profile"));
    }
    if grid_points < 2 {
        return Err(domain(format!("grid_points must be at least 2, got {grid_points}")));
    }
    Ok(())
}

fn tie_tol(v: f64) -> f64 {
    1e-12 * v.abs().max(1.0)
}

fn best_response_unchecked(
    graph: &FollowGraph,
    params: &CommunityParams,
    profile: &StrategyProfile,
    i: usize,
    grid_points: usize,
) -> BestResponse {
    let obj = MemberObjective::new(graph, params, profile.alpha(), i);
    let current = profile.get(i);
    let steps = (grid_points - 1) as f64;
    let mut candidates: Vec<(f64, f64)> = (0..grid_points)
        .map(|k| k as f64 / steps)
        .chain(std::iter::once(current))
        .chain(obj.breakpoints())
        .map(|a| (a, obj.reward(a)))
        .collect();
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0));
    let best = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let (alpha, reward) = *candidates
        .iter()
        .find(|c| c.1 >= best - tie_tol(best))
        .expect("candidate set is non-empty");
    BestResponse {
        alpha,
        reward,
        current_reward: obj.reward(current),
    }
}

/// Member `i`'s reward-maximising production fraction against the fixed
/// strategies of everyone else.
///
/// Searches the uniform grid `k / (grid_points - 1)`, the current strategy
/// and every supply breakpoint; near-ties resolve toward the smallest
/// fraction.
pub fn best_response(
    graph: &FollowGraph,
    params: &CommunityParams,
    profile: &StrategyProfile,
    i: usize,
    grid_points: usize,
) -> Result<BestResponse> {
    check_inputs(graph, params, profile, grid_points)?;
    if i >= graph.n() {
        return Err(domain(format!("member {i} out of range 0..{}", graph.n())));
    }
    Ok(best_response_unchecked(graph, params, profile, i, grid_points))
}

/// Reward of member `i` at the profile, computed through the same path
/// the best-response search uses.
pub fn member_reward(graph: &FollowGraph, params: &CommunityParams, profile: &StrategyProfile, i: usize) -> f64 {
    MemberObjective::new(graph, params, profile.alpha(), i).reward(profile.get(i))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    /// Per member: best achievable reward minus current reward.
    pub gaps: Vec<f64>,
    pub best_alpha: Vec<f64>,
    pub max_gap: f64,
    pub eps: f64,
    pub is_eps_nash: bool,
}

pub fn nash_gap(
    graph: &FollowGraph,
    params: &CommunityParams,
    profile: &StrategyProfile,
    grid_points: usize,
    eps: f64,
) -> Result<EquilibriumReport> {
    nash_gap_with(Execution::default(), graph, params, profile, grid_points, eps)
}

pub fn nash_gap_with(
    exec: Execution,
    graph: &FollowGraph,
    params: &CommunityParams,
    profile: &StrategyProfile,
    grid_points: usize,
    eps: f64,
) -> Result<EquilibriumReport> {
    check_inputs(graph, params, profile, grid_points)?;
    let responses = exec.map_indexed(graph.n(), |i| best_response_unchecked(graph, params, profile, i, grid_points));
    let gaps: Vec<f64> = responses.iter().map(|b| b.reward - b.current_reward).collect();
    let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(EquilibriumReport {
        best_alpha: responses.iter().map(|b| b.alpha).collect(),
        gaps,
        max_gap,
        eps,
        is_eps_nash: max_gap <= eps,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    RoundRobin,
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsStep {
    pub iteration: usize,
    pub profile: Vec<f64>,
    pub welfare: f64,
    pub max_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsTrace {
    pub steps: Vec<DynamicsStep>,
    pub converged: bool,
    pub final_profile: StrategyProfile,
}

/// Sequential best-response dynamics. Each iteration is one sweep in
/// which every member, in schedule order, adopts its (tie-broken) best
/// response, so a member indifferent over an interval drops to its
/// smallest optimal fraction; the sweep ends with a full [`nash_gap`]
/// measurement.
#[allow(clippy::too_many_arguments)]
pub fn best_response_dynamics(
    graph: &FollowGraph,
    params: &CommunityParams,
    initial: &StrategyProfile,
    schedule: Schedule,
    max_iters: usize,
    eps: f64,
    grid_points: usize,
) -> Result<DynamicsTrace> {
    check_inputs(graph, params, initial, grid_points)?;
    if max_iters < 1 {
        return Err(domain("max_iters must be at least 1"));
    }
    let n = graph.n();
    let mut profile = initial.clone();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = match schedule {
        Schedule::Random { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        Schedule::RoundRobin => None,
    };
    let mut steps = Vec::new();
    let mut converged = false;
    for iteration in 1..=max_iters {
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        for &i in &order {
            let br = best_response_unchecked(graph, params, &profile, i, grid_points);
            profile.set(i, br.alpha);
        }
        let report = nash_gap(graph, params, &profile, grid_points, eps)?;
        steps.push(DynamicsStep {
            iteration,
            profile: profile.alpha().to_vec(),
            welfare: fluid_rewards(graph, params, &profile)?.welfare,
            max_gap: report.max_gap,
        });
        if report.is_eps_nash {
            converged = true;
            break;
        }
    }
    Ok(DynamicsTrace {
        steps,
        converged,
        final_profile: profile,
    })
}

//! Expected-value reward evaluation on an arbitrary follow graph.
//!
//! Item counts are real numbers. Member `i` sees
//! `K_i = sum over followed producers j of alpha_j * N_p` items and consumes
//! `C_i = min((1 - alpha_i) N_c, K_i)` of them, picking uniformly, so every
//! visible item is consumed by `i` with probability `C_i / K_i`.

use serde::{Deserialize, Serialize};

use super::{CommunityParams, FollowGraph, StrategyProfile};
use crate::error::{domain, Result};

/// Demand and supply closer than this are classified as exact.
pub const EXACT_SUPPLY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemberReward {
    pub produced_items: f64,
    /// K_i: items visible to the member.
    pub available_items: f64,
    /// C_i: items the member consumes.
    pub consumed_items: f64,
    pub consumption_reward: f64,
    pub production_reward: f64,
}

impl MemberReward {
    pub fn total(&self) -> f64 {
        self.production_reward + self.consumption_reward
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub members: Vec<MemberReward>,
    pub total_consumption: f64,
    /// Social welfare G = (r_p + r_c) * total consumption.
    pub welfare: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupplyStatus {
    UnderSupplied,
    Exact,
    OverSupplied,
}

fn check_dims(graph: &FollowGraph, params: &CommunityParams, profile: &StrategyProfile) -> Result<()> {
    if graph.n() != params.n || profile.len() != params.n {
        return Err(domain(format!(
            "dimension mismatch: graph has {}, params {}, profile {} members",
            graph.n(),
            params.n,
            profile.len()
        )));
    }
    Ok(())
}

pub(crate) fn available_items(graph: &FollowGraph, params: &CommunityParams, alpha: &[f64]) -> Vec<f64> {
    (0..graph.n())
        .map(|i| graph.follows(i).iter().map(|&j| alpha[j] * params.n_p).sum())
        .collect()
}

pub(crate) fn consumption(demand: f64, available: f64) -> f64 {
    if available > 0.0 {
        demand.min(available)
    } else {
        0.0
    }
}

pub fn fluid_rewards(
    graph: &FollowGraph,
    params: &CommunityParams,
    profile: &StrategyProfile,
) -> Result<RewardBreakdown> {
    check_dims(graph, params, profile)?;
    let alpha = profile.alpha();
    let avail = available_items(graph, params, alpha);
    let consumed: Vec<f64> = (0..graph.n())
        .map(|i| consumption((1.0 - alpha[i]) * params.n_c, avail[i]))
        .collect();
    let pick_rate: Vec<f64> = consumed
        .iter()
        .zip(&avail)
        .map(|(&c, &k)| if k > 0.0 { c / k } else { 0.0 })
        .collect();

    let members: Vec<MemberReward> = (0..graph.n())
        .map(|i| {
            let produced = alpha[i] * params.n_p;
            let expected_consumers: f64 = graph.followers(i).iter().map(|&f| pick_rate[f]).sum();
            MemberReward {
                produced_items: produced,
                available_items: avail[i],
                consumed_items: consumed[i],
                consumption_reward: params.r_c * consumed[i],
                production_reward: params.r_p * produced * expected_consumers,
            }
        })
        .collect();
    let total_consumption: f64 = consumed.iter().sum();
    Ok(RewardBreakdown {
        members,
        total_consumption,
        welfare: params.reward_sum() * total_consumption,
    })
}

pub fn supply_status(
    graph: &FollowGraph,
    params: &CommunityParams,
    profile: &StrategyProfile,
) -> Result<Vec<SupplyStatus>> {
    check_dims(graph, params, profile)?;
    let alpha = profile.alpha();
    let avail = available_items(graph, params, alpha);
    Ok(alpha
        .iter()
        .zip(avail)
        .map(|(&a, k)| {
            let demand = (1.0 - a) * params.n_c;
            if (demand - k).abs() <= EXACT_SUPPLY_TOL {
                SupplyStatus::Exact
            } else if demand < k {
                SupplyStatus::OverSupplied
            } else {
                SupplyStatus::UnderSupplied
            }
        })
        .collect())
}

//! Community parameters, follow graphs, strategy profiles and the
//! expected-value ("fluid") reward evaluator.

mod fluid;
mod graph;
mod params;
mod profile;

pub use fluid::{fluid_rewards, supply_status, MemberReward, RewardBreakdown, SupplyStatus, EXACT_SUPPLY_TOL};
pub use graph::{build_celebrity_graph, build_uniform_graph, FollowGraph, GraphKind};
pub use params::CommunityParams;
pub use profile::StrategyProfile;

//! Verification engines independent of the closed forms: exhaustive grid
//! search over strategy profiles and a discrete Monte Carlo simulator of
//! the random item-selection process.

mod grid;
mod monte_carlo;

pub use grid::{grid_search_welfare, grid_search_welfare_with, lipschitz_slack, GridSearchResult, GRID_EVAL_LIMIT};
pub use monte_carlo::{monte_carlo_rewards, monte_carlo_rewards_with, MonteCarloEstimate};

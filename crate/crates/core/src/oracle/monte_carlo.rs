use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Hypergeometric};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::exec::Execution;
use crate::model::{CommunityParams, FollowGraph, StrategyProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean_welfare: f64,
    pub member_means: Vec<f64>,
    /// Sample standard deviation of per-trial welfare over sqrt(trials).
    pub standard_error: f64,
    pub trials: usize,
    pub seed: u64,
}

/// floor(x) plus a Bernoulli draw on the fractional part.
fn stochastic_round(x: f64, rng: &mut ChaCha8Rng) -> u64 {
    let base = x.floor();
    let frac = x - base;
    base as u64 + u64::from(frac > 0.0 && rng.random::<f64>() < frac)
}

/// Independent stream for one member in one trial: stream = trial,
/// offset = member * 2^36 words.
fn member_rng(master: &ChaCha8Rng, trial: usize, member: usize) -> ChaCha8Rng {
    let mut rng = master.clone();
    rng.set_stream(trial as u64);
    rng.set_word_pos((member as u128) << 36);
    rng
}

fn run_trial(
    graph: &FollowGraph,
    params: &CommunityParams,
    alpha: &[f64],
    master: &ChaCha8Rng,
    trial: usize,
) -> Vec<f64> {
    let n = graph.n();
    let mut rngs: Vec<ChaCha8Rng> = (0..n).map(|i| member_rng(master, trial, i)).collect();
    let produced: Vec<u64> = (0..n)
        .map(|i| stochastic_round(alpha[i] * params.n_p, &mut rngs[i]))
        .collect();
    let capacity: Vec<u64> = (0..n)
        .map(|i| stochastic_round((1.0 - alpha[i]) * params.n_c, &mut rngs[i]))
        .collect();

    let mut reward = vec![0.0; n];
    for i in 0..n {
        let sources = graph.follows(i);
        let visible: u64 = sources.iter().map(|&j| produced[j]).sum();
        let take = capacity[i].min(visible);
        reward[i] += params.r_c * take as f64;
        // Uniform draw without replacement from the pooled items, split by
        // producer one hypergeometric at a time.
        let (mut pool, mut left) = (visible, take);
        for &j in sources {
            if left == 0 {
                break;
            }
            let got = if produced[j] == pool {
                left
            } else {
                Hypergeometric::new(pool, produced[j], left)
                    .expect("counts are consistent")
                    .sample(&mut rngs[i])
            };
            reward[j] += params.r_p * got as f64;
            pool -= produced[j];
            left -= got;
        }
    }
    reward
}

pub fn monte_carlo_rewards(
    graph: &FollowGraph,
    params: &CommunityParams,
    profile: &StrategyProfile,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    monte_carlo_rewards_with(Execution::default(), graph, params, profile, trials, seed)
}

/// Simulates the discrete selection process: each trial rounds item counts
/// and consumption capacities stochastically, then every member consumes
/// `min(capacity, visible)` items drawn uniformly without replacement from
/// the items of the producers it follows.
///
/// Results depend only on the inputs and `seed`, never on the execution
/// mode or thread count.
pub fn monte_carlo_rewards_with(
    exec: Execution,
    graph: &FollowGraph,
    params: &CommunityParams,
    profile: &StrategyProfile,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if trials < 1 {
        return Err(domain("trials must be at least 1"));
    }
    if graph.n() != params.n || profile.len() != params.n {
        return Err(domain("dimension mismatch between graph, params and profile"));
    }
    let master = ChaCha8Rng::seed_from_u64(seed);
    let per_trial = exec.map_indexed(trials, |t| run_trial(graph, params, profile.alpha(), &master, t));

    let n = graph.n();
    let t = trials as f64;
    let welfare: Vec<f64> = per_trial.iter().map(|r| r.iter().sum()).collect();
    let mean = welfare.iter().sum::<f64>() / t;
    let mut member_means = vec![0.0; n];
    for r in &per_trial {
        for (m, v) in member_means.iter_mut().zip(r) {
            *m += v;
        }
    }
    member_means.iter_mut().for_each(|m| *m /= t);
    let sd = if trials > 1 {
        (welfare.iter().map(|w| (w - mean).powi(2)).sum::<f64>() / (t - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        mean_welfare: mean,
        member_means,
        standard_error: sd / t.sqrt(),
        trials,
        seed,
    })
}

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::exec::Execution;
use crate::model::{CommunityParams, FollowGraph, StrategyProfile};

/// Largest number of profiles a single search may evaluate.
pub const GRID_EVAL_LIMIT: u128 = 200_000_000;
const MAX_FULL_MEMBERS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub best_profile: StrategyProfile,
    pub best_welfare: f64,
    pub evaluations: u128,
}

/// Upper bound on how far welfare can move when every coordinate moves by
/// at most `step`: one unit of alpha shifts a member's own consumption by
/// at most N_c and each follower's by at most N_p.
pub fn lipschitz_slack(graph: &FollowGraph, params: &CommunityParams, step: f64) -> f64 {
    let per_unit = graph.n() as f64 * params.n_c + graph.edge_count() as f64 * params.n_p;
    params.reward_sum() * step * per_unit
}

/// Grid-point consumption kernel on integer strategy indices. All
/// arithmetic on visible-item counts stays in integers so equal profiles
/// always produce bit-identical totals.
struct Kernel<'a> {
    graph: &'a FollowGraph,
    steps: u32,
    n_p: f64,
    n_c: f64,
}

impl Kernel<'_> {
    fn total(&self, k: &[u32], visible: &[u32]) -> f64 {
        k.iter()
            .zip(visible)
            .map(|(&ki, &si)| ((self.steps - ki) as f64 * self.n_c).min(si as f64 * self.n_p))
            .sum()
    }

    fn visible(&self, k: &[u32]) -> Vec<u32> {
        (0..self.graph.n())
            .map(|i| self.graph.follows(i).iter().map(|&j| k[j]).sum())
            .collect()
    }

    fn shift(&self, visible: &mut [u32], j: usize, from: u32, to: u32) {
        for &f in self.graph.followers(j) {
            visible[f] = visible[f] - from + to;
        }
    }
}

#[derive(Clone)]
struct Best {
    total: f64,
    k: Vec<u32>,
}

impl Best {
    fn offer(&mut self, total: f64, k: &[u32]) {
        if total > self.total || (total == self.total && k < self.k.as_slice()) {
            self.total = total;
            self.k.clear();
            self.k.extend_from_slice(k);
        }
    }

    fn merge(mut self, other: Best) -> Best {
        self.offer(other.total, &other.k);
        self
    }
}

fn grid_steps(grid_step: f64) -> Result<u32> {
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(domain(format!("grid_step {grid_step} must lie in (0, 1]")));
    }
    let steps = (1.0 / grid_step).round();
    if (steps * grid_step - 1.0).abs() > 1e-9 || steps > u32::MAX as f64 / 64.0 {
        return Err(domain(format!("grid_step {grid_step} must divide 1 evenly")));
    }
    Ok(steps as u32)
}

pub fn grid_search_welfare(
    graph: &FollowGraph,
    params: &CommunityParams,
    grid_step: f64,
    symmetric_by_role: bool,
) -> Result<GridSearchResult> {
    grid_search_welfare_with(Execution::default(), graph, params, grid_step, symmetric_by_role)
}

/// Exhaustively maximises welfare over profiles on the grid
/// `{0, step, 2 step, ..., 1}`.
///
/// With `symmetric_by_role` all followed members share one fraction and
/// all unfollowed members share another; otherwise every member varies
/// independently. Ties go to the lexicographically smallest profile.
pub fn grid_search_welfare_with(
    exec: Execution,
    graph: &FollowGraph,
    params: &CommunityParams,
    grid_step: f64,
    symmetric_by_role: bool,
) -> Result<GridSearchResult> {
    params.validate()?;
    if graph.n() != params.n {
        return Err(domain("graph size differs from n"));
    }
    let steps = grid_steps(grid_step)?;
    let kernel = Kernel {
        graph,
        steps,
        n_p: params.n_p,
        n_c: params.n_c,
    };
    let n = graph.n();
    let levels = steps as u128 + 1;

    let (best, evaluations) = if symmetric_by_role {
        let followed: Vec<bool> = (0..n).map(|j| graph.in_degree(j) > 0).collect();
        let roles = 1 + usize::from(followed.iter().any(|f| !f) && followed.iter().any(|&f| f));
        let count = levels.pow(roles as u32);
        let combos = exec.map_indexed(count as usize, |c| {
            let (a, b) = ((c as u128 % levels) as u32, (c as u128 / levels) as u32);
            // With a single role everyone takes `a`.
            let k: Vec<u32> = followed.iter().map(|&f| if f || roles == 1 { a } else { b }).collect();
            let total = kernel.total(&k, &kernel.visible(&k));
            Best { total, k }
        });
        let best = combos.into_iter().reduce(Best::merge).expect("at least one grid point");
        (best, count)
    } else {
        let count = levels.checked_pow(n as u32).unwrap_or(u128::MAX);
        if n > MAX_FULL_MEMBERS || count > GRID_EVAL_LIMIT {
            return Err(Error::Resource {
                count,
                limit: GRID_EVAL_LIMIT,
            });
        }
        let chunks = exec.map_indexed(levels as usize, |first| enumerate_suffix(&kernel, first as u32));
        let best = chunks.into_iter().reduce(Best::merge).expect("at least one grid point");
        (best, count)
    };

    let inv = steps as f64;
    let alpha = best.k.iter().map(|&k| k as f64 / inv).collect();
    Ok(GridSearchResult {
        best_profile: StrategyProfile::new(alpha)?,
        best_welfare: params.reward_sum() * best.total / inv,
        evaluations,
    })
}

/// Lexicographic odometer over members `1..n` with member 0 fixed at
/// `first`. The innermost coordinate (member `n - 1`) only changes its own
/// consumption and that of its followers, so the rest of the total is
/// computed once per outer configuration.
fn enumerate_suffix(kernel: &Kernel<'_>, first: u32) -> Best {
    let n = kernel.graph.n();
    let mut k = vec![0u32; n];
    k[0] = first;
    let mut visible = kernel.visible(&k);
    let mut best = Best {
        total: f64::NEG_INFINITY,
        k: k.clone(),
    };
    if n == 1 {
        best.offer(kernel.total(&k, &visible), &k);
        return best;
    }
    let last = n - 1;
    // Members whose visible count moves with k[last], besides `last` itself.
    let seers: Vec<usize> = kernel.graph.followers(last).iter().copied().filter(|&a| a != last).collect();
    let untouched: Vec<usize> = (0..last).filter(|i| seers.binary_search(i).is_err()).collect();
    let last_sees_itself = kernel.graph.follows_self(last);
    let (np, nc, steps) = (kernel.n_p, kernel.n_c, kernel.steps);
    // min(capacity, items) is zero whenever nothing is visible, so no
    // special case is needed for empty feeds.
    let eat = |ki: u32, si: u32| ((steps - ki) as f64 * nc).min(si as f64 * np);
    let mut caps = vec![0.0; seers.len()];
    let mut seen = vec![0.0; seers.len()];
    loop {
        // `visible` holds counts with k[last] = 0 here.
        let base: f64 = untouched.iter().map(|&u| eat(k[u], visible[u])).sum();
        for (t, &a) in seers.iter().enumerate() {
            caps[t] = (steps - k[a]) as f64 * nc;
            seen[t] = visible[a] as f64 * np;
        }
        for kl in 0..=steps {
            k[last] = kl;
            let extra = kl as f64 * np;
            let local: f64 = caps.iter().zip(&seen).map(|(&c, &v)| c.min(v + extra)).sum();
            let own = eat(kl, visible[last] + if last_sees_itself { kl } else { 0 });
            best.offer(base + local + own, &k);
        }
        k[last] = 0;
        // advance coordinates n-2 down to 1, carrying leftwards
        let mut pos = last;
        loop {
            if pos == 1 {
                return best;
            }
            pos -= 1;
            if k[pos] < kernel.steps {
                kernel.shift(&mut visible, pos, k[pos], k[pos] + 1);
                k[pos] += 1;
                break;
            }
            kernel.shift(&mut visible, pos, k[pos], 0);
            k[pos] = 0;
        }
    }
}

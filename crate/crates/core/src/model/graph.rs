use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Which constructor produced a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    /// Members `0..m` are followed by everyone, including themselves.
    CelebrityFollower { m: usize },
    /// Every member follows and is followed by exactly `d` members.
    Uniform { d: usize },
    Arbitrary,
}

/// Directed follow relation: member `i` sees the items of every producer
/// in `follows(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FollowGraph {
    n: usize,
    follows: Vec<Vec<usize>>,
    followers: Vec<Vec<usize>>,
    kind: GraphKind,
}

impl FollowGraph {
    /// Builds a graph from per-member follow lists. Lists are sorted and
    /// deduplicated.
    pub fn from_follows(follows: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_kind(follows, GraphKind::Arbitrary)
    }

    fn with_kind(mut follows: Vec<Vec<usize>>, kind: GraphKind) -> Result<Self> {
        let n = follows.len();
        if n == 0 {
            return Err(domain("graph needs at least one member"));
        }
        let mut followers = vec![Vec::new(); n];
        for (i, list) in follows.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            if let Some(&j) = list.iter().find(|&&j| j >= n) {
                return Err(domain(format!("member {i} follows {j}, outside 0..{n}")));
            }
            for &j in list.iter() {
                followers[j].push(i);
            }
        }
        Ok(FollowGraph { n, follows, followers, kind })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    /// Producers whose items member `i` can see.
    pub fn follows(&self, i: usize) -> &[usize] {
        &self.follows[i]
    }

    /// Members who see the items of producer `j`.
    pub fn followers(&self, j: usize) -> &[usize] {
        &self.followers[j]
    }

    pub fn edge_count(&self) -> usize {
        self.follows.iter().map(Vec::len).sum()
    }

    pub fn in_degree(&self, j: usize) -> usize {
        self.followers[j].len()
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.follows[i].len()
    }

    pub fn follows_self(&self, i: usize) -> bool {
        self.follows[i].binary_search(&i).is_ok()
    }

    /// Same graph with member labels permuted: old member `i` becomes
    /// member `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(domain("permutation length differs from n"));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(domain("not a permutation"));
            }
        }
        let mut follows = vec![Vec::new(); self.n];
        for (i, list) in self.follows.iter().enumerate() {
            follows[perm[i]] = list.iter().map(|&j| perm[j]).collect();
        }
        Self::with_kind(follows, GraphKind::Arbitrary)
    }
}

/// Celebrity-follower structure with `m` celebrities (members `0..m`).
pub fn build_celebrity_graph(n: usize, m: usize) -> Result<FollowGraph> {
    if n < 1 || m < 1 || m > n {
        return Err(domain(format!("celebrity count {m} must lie in 1..={n}")));
    }
    let celebs: Vec<usize> = (0..m).collect();
    FollowGraph::with_kind(vec![celebs; n], GraphKind::CelebrityFollower { m })
}

/// Circulant regular digraph: member `i` follows `i, i+1, ..., i+d-1 (mod n)`.
pub fn build_uniform_graph(n: usize, d: usize) -> Result<FollowGraph> {
    if n < 1 || d < 1 || d > n {
        return Err(domain(format!("follow degree {d} must lie in 1..={n}")));
    }
    let follows = (0..n).map(|i| (0..d).map(|k| (i + k) % n).collect()).collect();
    FollowGraph::with_kind(follows, GraphKind::Uniform { d })
}

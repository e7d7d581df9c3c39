use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Per-member fraction of unit time spent producing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyProfile {
    alpha: Vec<f64>,
}

impl StrategyProfile {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(domain("profile must have at least one member"));
        }
        if let Some((i, a)) = alpha
            .iter()
            .enumerate()
            .find(|(_, a)| !(0.0..=1.0).contains(*a))
        {
            return Err(domain(format!("alpha[{i}] = {a} is outside [0, 1]")));
        }
        Ok(StrategyProfile { alpha })
    }

    /// Everyone at the same `alpha`.
    pub fn uniform(n: usize, alpha: f64) -> Result<Self> {
        Self::new(vec![alpha; n])
    }

    /// The first `core` members at `alpha_core`, the rest at `alpha_other`.
    pub fn core_periphery(n: usize, core: usize, alpha_core: f64, alpha_other: f64) -> Result<Self> {
        if core > n {
            return Err(domain(format!("core size {core} exceeds n = {n}")));
        }
        let mut alpha = vec![alpha_other; n];
        alpha[..core].fill(alpha_core);
        Self::new(alpha)
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn get(&self, i: usize) -> f64 {
        self.alpha[i]
    }

    /// Sum of all production fractions.
    pub fn s(&self) -> f64 {
        self.alpha.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.s() / self.len() as f64
    }

    /// Copy with member `i` switched to `alpha`.
    pub fn with(&self, i: usize, alpha: f64) -> Result<Self> {
        if i >= self.len() {
            return Err(domain(format!("member {i} out of range")));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(domain(format!("alpha {alpha} is outside [0, 1]")));
        }
        let mut next = self.alpha.clone();
        next[i] = alpha;
        Ok(StrategyProfile { alpha: next })
    }

    pub(crate) fn set(&mut self, i: usize, alpha: f64) {
        debug_assert!((0.0..=1.0).contains(&alpha));
        self.alpha[i] = alpha;
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.alpha
    }
}

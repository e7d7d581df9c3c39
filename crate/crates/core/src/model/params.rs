use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// The shared constants of a community: size, production/consumption
/// capacity per unit time, and the per-consumption rewards.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommunityParams {
    /// Member count.
    pub n: usize,
    /// Items produced per unit time at full production effort.
    pub n_p: f64,
    /// Items consumable per unit time at full consumption effort.
    pub n_c: f64,
    /// Reward to a producer each time one of its items is consumed.
    pub r_p: f64,
    /// Reward to a consumer per item consumed.
    pub r_c: f64,
}

impl CommunityParams {
    pub fn new(n: usize, n_p: f64, n_c: f64, r_p: f64, r_c: f64) -> Result<Self> {
        let p = CommunityParams { n, n_p, n_c, r_p, r_c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(domain("n must be at least 1"));
        }
        let finite = [self.n_p, self.n_c, self.r_p, self.r_c].iter().all(|v| v.is_finite());
        if !finite {
            return Err(domain("parameters must be finite"));
        }
        if self.n_p <= 0.0 {
            return Err(domain(format!("N_p must be positive, got {}", self.n_p)));
        }
        if self.n_c < 0.0 || self.r_p < 0.0 || self.r_c < 0.0 {
            return Err(domain("N_c, r_p and r_c must be non-negative"));
        }
        // Consumption capacity never exceeds what the whole community can produce.
        if self.supply_ratio() > 1.0 + 1e-12 {
            return Err(domain(format!(
                "N_c / (n N_p) = {} exceeds 1",
                self.supply_ratio()
            )));
        }
        Ok(())
    }

    /// N_c / (n N_p).
    pub fn supply_ratio(&self) -> f64 {
        self.n_c / (self.n as f64 * self.n_p)
    }

    /// N_c r_c / (n N_p r_p), infinite when production carries no reward
    /// but consumption does.
    pub fn reward_ratio(&self) -> f64 {
        let num = self.n_c * self.r_c;
        let den = self.n as f64 * self.n_p * self.r_p;
        if num == 0.0 {
            0.0
        } else if den == 0.0 {
            f64::INFINITY
        } else {
            num / den
        }
    }

    pub fn reward_sum(&self) -> f64 {
        self.r_p + self.r_c
    }

    /// Same community with both rewards multiplied by `c`.
    pub fn scale_rewards(&self, c: f64) -> Self {
        CommunityParams {
            r_p: self.r_p * c,
            r_c: self.r_c * c,
            ..*self
        }
    }
}

use serde::{Deserialize, Serialize};

use super::check_eta;
use crate::error::Result;
use crate::model::CommunityParams;

/// Distance within which eta counts as sitting on a threshold.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    Case1,
    Case2,
    Case3,
    Case4,
    /// eta sits on a governing threshold and neither strict case fires.
    Boundary,
    /// eta < min(N_c/(nN_p), 1 - N_c/(nN_p)) but the reward threshold
    /// `1 - N_c r_c/(n N_p r_p)` fails, so none of the four cases applies.
    /// Welfare follows the Case 1 regime.
    Uncovered,
}

impl CaseId {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Case1 => "Case1",
            CaseId::Case2 => "Case2",
            CaseId::Case3 => "Case3",
            CaseId::Case4 => "Case4",
            CaseId::Boundary => "Boundary",
            CaseId::Uncovered => "Uncovered",
        }
    }
}

impl std::fmt::Display for CaseId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// N_c / (n N_p)
    pub supply_ratio: f64,
    /// 1 - N_c / (n N_p)
    pub complement: f64,
    /// 1 - N_c r_c / (n N_p r_p)
    pub reward: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseLabel {
    pub id: CaseId,
    /// Welfare regime whose formulas give the optimum: always one of
    /// `Case1..Case4`, equal to `id` unless `id` is `Boundary` or `Uncovered`.
    pub regime: CaseId,
    pub eta: f64,
    pub thresholds: Thresholds,
    pub below_supply_ratio: bool,
    pub below_complement: bool,
    pub below_reward: bool,
}

fn welfare_regime(x: f64, eta: f64) -> CaseId {
    if eta < x.min(1.0 - x) {
        CaseId::Case1
    } else if x > 0.5 {
        if eta <= x {
            CaseId::Case2
        } else {
            CaseId::Case4
        }
    } else if eta <= 1.0 - x {
        CaseId::Case3
    } else {
        CaseId::Case4
    }
}

/// Classifies `eta` against the four celebrity-structure cases, tested in
/// order with the inequalities exactly as stated (Cases 1 and 4 strict,
/// Cases 2 and 3 inclusive).
pub fn classify_case(params: &CommunityParams, eta: f64) -> Result<CaseLabel> {
    check_eta(params, eta)?;
    let x = params.supply_ratio();
    let t = Thresholds {
        supply_ratio: x,
        complement: 1.0 - x,
        reward: 1.0 - params.reward_ratio(),
    };
    let case1 = eta < x.min(t.complement).min(t.reward);
    let case2 = x > 0.5 && x <= 1.0 && t.complement <= eta && eta <= x;
    let case3 = (0.0..=0.5).contains(&x) && x <= eta && eta <= t.complement;
    let case4 = eta > x.max(t.complement);

    let near = |th: f64| (eta - th).abs() <= BOUNDARY_TOL;
    let regime = welfare_regime(x, eta);
    // The reward threshold only governs the Case 1 region.
    let on_threshold = near(x) || near(t.complement) || (regime == CaseId::Case1 && near(t.reward));

    let id = if case1 {
        CaseId::Case1
    } else if case4 {
        CaseId::Case4
    } else if on_threshold {
        CaseId::Boundary
    } else if case2 {
        CaseId::Case2
    } else if case3 {
        CaseId::Case3
    } else {
        CaseId::Uncovered
    };
    Ok(CaseLabel {
        id,
        regime,
        eta,
        thresholds: t,
        below_supply_ratio: eta < x,
        below_complement: eta < t.complement,
        below_reward: eta < t.reward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, n_p: f64, n_c: f64, r_p: f64, r_c: f64) -> CommunityParams {
        CommunityParams::new(n, n_p, n_c, r_p, r_c).unwrap()
    }

    #[test]
    fn four_cases() {
        let a = p(100, 10.0, 100.0, 1.0, 1.0);
        assert_eq!(classify_case(&a, 0.05).unwrap().id, CaseId::Case1);
        assert_eq!(classify_case(&p(10, 10.0, 60.0, 1.0, 1.0), 0.5).unwrap().id, CaseId::Case2);
        assert_eq!(classify_case(&a, 0.5).unwrap().id, CaseId::Case3);
        assert_eq!(classify_case(&a, 0.95).unwrap().id, CaseId::Case4);
    }

    #[test]
    fn thresholds_recorded() {
        let l = classify_case(&p(100, 10.0, 100.0, 1.0, 1.0), 0.05).unwrap();
        assert!(l.below_supply_ratio && l.below_complement && l.below_reward);
        assert!((l.thresholds.supply_ratio - 0.1).abs() < 1e-15);
        assert!((l.thresholds.reward - 0.9).abs() < 1e-15);
    }

    #[test]
    fn boundary_on_supply_ratio() {
        // eta = N_c/(n N_p) = 0.1 satisfies Case 3 inclusively but sits on a threshold.
        let l = classify_case(&p(100, 10.0, 100.0, 1.0, 1.0), 0.1).unwrap();
        assert_eq!(l.id, CaseId::Boundary);
        assert_eq!(l.regime, CaseId::Case3);
    }

    #[test]
    fn boundary_on_complement() {
        // x = 0.6, eta = 0.4 = 1 - x: Case 2 inclusive border.
        let l = classify_case(&p(10, 10.0, 60.0, 1.0, 1.0), 0.4).unwrap();
        assert_eq!(l.id, CaseId::Boundary);
        assert_eq!(l.regime, CaseId::Case2);
    }

    #[test]
    fn uncovered_when_consumption_reward_dominates() {
        // x = 0.1, 1 - x r_c / r_p = 1 - 0.1 * 10 = 0, so Case 1 never fires.
        let l = classify_case(&p(100, 10.0, 100.0, 1.0, 10.0), 0.05).unwrap();
        assert_eq!(l.id, CaseId::Uncovered);
        assert_eq!(l.regime, CaseId::Case1);
        assert!(!l.below_reward);
    }

    #[test]
    fn eta_out_of_range() {
        let a = p(10, 1.0, 5.0, 1.0, 1.0);
        assert!(classify_case(&a, 0.0).is_err());
        assert!(classify_case(&a, 1.01).is_err());
        assert!(classify_case(&a, f64::NAN).is_err());
        assert_eq!(classify_case(&a, 1.0).unwrap().id, CaseId::Case4);
    }
}

//! Closed-form optima, welfare maxima and Nash verdicts for the two
//! canonical community structures.

mod case;
mod compare;
mod deviation;
mod optimum;

pub use case::{classify_case, CaseId, CaseLabel, Thresholds, BOUNDARY_TOL};
pub use compare::{compare_structures, small_core_welfare, ComparisonReport};
pub use deviation::{deviation_delta, Role};
pub use optimum::{celebrity_optimum, core_size, uniform_optimum, Structure, StructureOptimum};

use crate::error::{domain, Result};
use crate::model::CommunityParams;

pub(crate) fn check_eta(params: &CommunityParams, eta: f64) -> Result<()> {
    params.validate()?;
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(domain(format!("eta = {eta} is outside (0, 1]")));
    }
    Ok(())
}

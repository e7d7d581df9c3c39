//! Content production and consumption in information communities.
//!
//! Members split unit time between producing items and consuming the items
//! of the producers they follow. This crate evaluates rewards and social
//! welfare on arbitrary follow graphs, gives the closed-form optima and
//! Nash verdicts for the celebrity-follower and uniform structures, and
//! ships independent oracles (exhaustive grid search, a discrete Monte Carlo
//! simulator, best-response dynamics) to check them.

pub mod closed_form;
pub mod equilibrium;
mod error;
pub mod exec;
pub mod harness;
pub mod model;
pub mod oracle;

pub use error::{Error, Result};
pub use exec::Execution;

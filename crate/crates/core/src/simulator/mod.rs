//! Monte Carlo execution of the pairing schemes.
//!
//! Every trial draws its own channel sequence and message bits from an RNG
//! stream derived from `(seed, trial)`, so reports do not depend on how trials
//! are scheduled across threads.

mod multi;
mod report;
mod single;

pub use multi::{estimate_subchannel_law, simulate_multi_hop, SubchannelEstimate};
pub use report::{SimulationReport, TrialRecord};
pub use single::simulate_single_hop;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimulationError {
    #[error("plan does not match network: {0}")]
    PlanMismatch(String),
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    MultiHop(#[from] crate::multi_hop::MultiHopError),
}

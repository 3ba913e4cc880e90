//! Traffic load balancing for cache-enabled small cell networks whose
//! stations draw on both green and grid power.
//!
//! The crate models a two-tier deployment (macro and small cells), the
//! processor-sharing radio queue and M/M/1 backhaul queue of every station,
//! a linear load-to-power model with a per-station green supply, and the
//! network-utility-aware (NUA) association that trades latency against
//! grid power through the coefficient `kappa`.
//!
//! ```text
//! Scenario ──▶ Network (rates, demand) ──▶ nua::run ──▶ report::compute_metrics
//!                                     └──▶ baselines (DRB bias sweep, cache-unaware NUA)
//! ```

pub mod baselines;
pub mod energy;
pub mod error;
pub mod network;
pub mod nua;
pub mod queueing;
pub mod report;
pub mod scenario;
#[doc(hidden)]
pub mod testing;

pub use baselines::{drb_associate, drb_sweep, nua_nc_run, BiasConfig, DrbSweep};
pub use energy::EnergyState;
pub use error::{Error, QueueKind, Result};
pub use network::Network;
pub use nua::{run, Advertisement, IterationTrace, RunOptions, RunOutcome, RunStatus};
pub use queueing::{Association, LoadState};
pub use report::{compute_metrics, CoverageMap, MetricsBundle};
pub use scenario::{generate_scenario, BaseStation, BsKind, GenerationParams, Location, Scenario};

//! Agent-based model of a firm whose employees hold different higher-order
//! values, form an interaction network from similar daily time use and
//! respond to an adaptive management strategy.

pub mod behavior;
pub mod config;
pub mod economy;
pub mod engine;
pub mod error;
pub mod management;
pub mod metrics;
pub mod network;
pub mod record;
pub mod rng;
pub mod types;
pub mod wellbeing;

pub use config::{validate_config, NormLag, ObsMeanDivisor, Scenario, SimConfig, TimeInitMethod, Violation};
pub use engine::{run_replicates, run_replicates_serial, run_scenario, FirmState, ReplicateSet, RunResult, Simulation};
pub use error::ModelError;
pub use metrics::Ledger;
pub use record::{col, AgentSnapshot, DayRecord, SeriesRow, OBSERVABLE_NAMES};
pub use rng::{seed_replicate, SimRng, StreamSeed};
pub use types::{Employee, ManagementState, Strategy, TimeAllocation, ValueType};

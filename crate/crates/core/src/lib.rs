//! Uplink resource-block scheduling for LTE video-surveillance cells.
//!
//! Cameras upload video over SC-FDMA; each camera may use one sub-band and
//! its RBs there must be contiguous. Schedulers choose which cameras to
//! serve so that every monitored object stays covered while total
//! monitoring quality is maximized.

pub mod channel;
pub mod dynamic;
pub mod error;
pub mod harness;
pub mod fixtures;
pub mod oracle;
pub mod rng;
pub mod scenario;
pub mod sched;

pub use channel::{ChannelEnv, ChannelState, McsLevel, SpectrumConfig};
pub use error::{Error, Result};
pub use oracle::{solve_exact, ExactSolution};
pub use scenario::{CameraSpec, QoVWeights, Scenario, ScenarioParams, TargetObject};
pub use sched::{
    objective_value, schedule_baseline, schedule_mqbs, validate_allocation, AllocationMap,
    ScheduleInstance, Violation,
};

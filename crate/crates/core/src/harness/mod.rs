//! Experiment driver: random instance construction, parameter sweeps that
//! compare MQBS against the channel-first baseline, and timelines mixing
//! periodic MQBS epochs with background-traffic events.

mod sweep;
mod timeline;
mod traffic;

use serde::{Deserialize, Serialize};

use crate::channel::{build_channel_state, ChannelEnv, SpectrumConfig};
use crate::error::Result;
use crate::rng::derive_seed;
use crate::scenario::{generate_scenario, ScenarioParams};
use crate::sched::ScheduleInstance;

pub use sweep::{
    run_point, run_sweep, write_csv, Algo, AlgoMetrics, ExperimentConfig, PointRecord, ResultRow,
    SweepVariable, CSV_HEADER,
};
pub use timeline::{run_timeline, write_log, LogKind, LogRecord, TimelineConfig};
pub use traffic::{generate_events, read_events, Event, EventKind, TrafficConfig};

/// Everything needed to draw one random instance, except the seed.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InstanceParams {
    pub scenario: ScenarioParams,
    pub spectrum: SpectrumConfig,
    pub channel: ChannelEnv,
}

/// Draws a coverage-feasible scenario and its channel state. The scenario
/// and shadowing streams are both derived from `seed`; the seeds stored in
/// `params` are ignored.
pub fn build_instance(params: &InstanceParams, seed: u64) -> Result<ScheduleInstance> {
    let mut sp = params.scenario.clone();
    sp.seed = derive_seed(seed, &[1]);
    let mut env = params.channel.clone();
    env.seed = derive_seed(seed, &[2]);
    let scenario = generate_scenario(&sp)?;
    let channel = build_channel_state(&scenario, &params.spectrum, &env)?;
    ScheduleInstance::new(scenario, channel, params.spectrum)
}

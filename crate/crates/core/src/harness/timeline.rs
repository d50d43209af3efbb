use serde::{Deserialize, Serialize};

use super::traffic::{Event, EventKind};
use crate::dynamic::{
    admit_background, default_thresholds, release_background, AdmitOutcome, BackgroundFlow,
    DynamicState,
};
use crate::error::{Error, Result};
use crate::sched::{objective_value, ScheduleInstance};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TimelineConfig {
    /// Spacing of full MQBS recomputations.
    pub period_ms: u64,
    /// Last epoch time considered; defaults to the last event time.
    pub horizon_ms: Option<u64>,
    pub th_h: Option<u32>,
    pub th_l: Option<u32>,
}

impl Default for TimelineConfig {
    fn default() -> Self {
        Self {
            period_ms: 10_000,
            horizon_ms: None,
            th_h: None,
            th_l: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogKind {
    Epoch,
    Arrival,
    Departure,
}

/// State after one transition. `error` is set when the transition was not
/// applied (epoch infeasible, unknown flow); the state is then unchanged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRecord {
    pub seq: usize,
    pub time_ms: u64,
    pub kind: LogKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow_id: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcome: Option<AdmitOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub remaining: Vec<u32>,
    /// Sub-band of each camera, `null` when unscheduled.
    pub assignment: Vec<Option<usize>>,
    pub flows: Vec<u64>,
    pub objective: f64,
    pub all_covered: bool,
}

fn snapshot(
    state: &DynamicState,
    seq: usize,
    time_ms: u64,
    kind: LogKind,
    flow_id: Option<u64>,
) -> LogRecord {
    LogRecord {
        seq,
        time_ms,
        kind,
        flow_id,
        outcome: None,
        error: None,
        remaining: state.alloc.remaining.clone(),
        assignment: (0..state.instance.num_cameras())
            .map(|k| state.alloc.sub_band_of(k))
            .collect(),
        flows: state.flows.iter().map(|f| f.id).collect(),
        objective: objective_value(&state.alloc, &state.instance.scenario),
        all_covered: state.all_covered(),
    }
}

/// Replays `events` against `instance`, running MQBS at t=0 and every
/// `period_ms`. An epoch due at the same time as an event runs first.
/// Returns the log and the final state.
pub fn run_timeline(
    instance: ScheduleInstance,
    events: &[Event],
    cfg: &TimelineConfig,
) -> Result<(Vec<LogRecord>, DynamicState)> {
    if cfg.period_ms == 0 {
        return Err(Error::InvalidParameter("period_ms must be positive".into()));
    }
    if events.windows(2).any(|w| w[1].time_ms < w[0].time_ms) {
        return Err(Error::InvalidParameter("events must be time-ordered".into()));
    }
    let (dh, dl) = default_thresholds(instance.spectrum.rbs_per_subband);
    let alloc = crate::sched::schedule_mqbs(&instance)?;
    let mut state = DynamicState::new(
        instance,
        alloc,
        cfg.th_h.unwrap_or(dh),
        cfg.th_l.unwrap_or(dl),
    )?;
    let horizon = cfg
        .horizon_ms
        .unwrap_or_else(|| events.last().map_or(0, |e| e.time_ms));

    let mut log = vec![snapshot(&state, 0, 0, LogKind::Epoch, None)];
    let mut next_epoch = cfg.period_ms;
    let epoch = |state: &mut DynamicState, log: &mut Vec<LogRecord>, t: u64| {
        let err = state.run_epoch().err();
        let mut rec = snapshot(state, log.len(), t, LogKind::Epoch, None);
        rec.error = err.map(|e| e.to_string());
        log.push(rec);
    };

    for ev in events {
        while next_epoch <= ev.time_ms && next_epoch <= horizon {
            epoch(&mut state, &mut log, next_epoch);
            next_epoch += cfg.period_ms;
        }
        match &ev.kind {
            EventKind::Arrival { flow_id, rb_req } => {
                let flow = BackgroundFlow::new(*flow_id, rb_req.clone());
                let result = admit_background(&mut state, flow);
                let mut rec = snapshot(&state, log.len(), ev.time_ms, LogKind::Arrival, Some(*flow_id));
                match result {
                    Ok(o) => rec.outcome = Some(o),
                    Err(e) => rec.error = Some(e.to_string()),
                }
                log.push(rec);
            }
            EventKind::Departure { flow_id } => {
                let err = release_background(&mut state, *flow_id).err();
                let mut rec =
                    snapshot(&state, log.len(), ev.time_ms, LogKind::Departure, Some(*flow_id));
                rec.error = err.map(|e| e.to_string());
                log.push(rec);
            }
        }
    }
    while next_epoch <= horizon {
        epoch(&mut state, &mut log, next_epoch);
        next_epoch += cfg.period_ms;
    }
    Ok((log, state))
}

/// One JSON object per line.
pub fn write_log<W: std::io::Write>(log: &[LogRecord], mut out: W) -> Result<()> {
    for rec in log {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

use std::io::{BufRead, BufReader, Read};

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::channel::SpectrumConfig;
use crate::error::{Error, Result};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventKind {
    Arrival { flow_id: u64, rb_req: Vec<u32> },
    Departure { flow_id: u64 },
}

/// One background-traffic event. Serialized flat, e.g.
/// `{"time_ms":1200,"kind":"arrival","flow_id":3,"rb_req":[2,1,4,3]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub time_ms: u64,
    #[serde(flatten)]
    pub kind: EventKind,
}

impl Event {
    pub fn flow_id(&self) -> u64 {
        match self.kind {
            EventKind::Arrival { flow_id, .. } | EventKind::Departure { flow_id } => flow_id,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrafficConfig {
    /// Poisson arrival rate, flows per second.
    pub arrival_rate_per_s: f64,
    /// Mean of the exponential flow lifetime, seconds.
    pub mean_lifetime_s: f64,
    /// Upper bound of the uniform per-sub-band demand; `W_m / 2` when unset.
    pub max_demand: Option<u32>,
    pub horizon_ms: u64,
    pub seed: u64,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        Self {
            arrival_rate_per_s: 0.5,
            mean_lifetime_s: 5.0,
            max_demand: None,
            horizon_ms: 60_000,
            seed: 0,
        }
    }
}

/// Poisson arrivals with uniform per-sub-band demand in `[1, max_demand]`
/// and exponential lifetimes. Departures past the horizon are dropped.
pub fn generate_events(cfg: &TrafficConfig, spectrum: &SpectrumConfig) -> Result<Vec<Event>> {
    if !(cfg.arrival_rate_per_s > 0.0 && cfg.mean_lifetime_s > 0.0) {
        return Err(Error::InvalidParameter("traffic rates must be positive".into()));
    }
    let max_demand = cfg
        .max_demand
        .unwrap_or(spectrum.rbs_per_subband / 2)
        .max(1);
    let gap = Exp::new(cfg.arrival_rate_per_s / 1000.0).expect("positive rate");
    let life = Exp::new(1.0 / (cfg.mean_lifetime_s * 1000.0)).expect("positive mean");
    let mut rng = rng::stream(cfg.seed, &[0x7aff_1c00]);

    let mut events = Vec::new();
    let mut t = 0.0f64;
    let mut next_id = 0u64;
    loop {
        t += gap.sample(&mut rng);
        let at = t.round() as u64;
        if at > cfg.horizon_ms {
            break;
        }
        let rb_req = (0..spectrum.num_sub_bands())
            .map(|_| rng.random_range(1..=max_demand))
            .collect();
        let leave = at + (life.sample(&mut rng).round() as u64).max(1);
        events.push(Event {
            time_ms: at,
            kind: EventKind::Arrival {
                flow_id: next_id,
                rb_req,
            },
        });
        if leave <= cfg.horizon_ms {
            events.push(Event {
                time_ms: leave,
                kind: EventKind::Departure { flow_id: next_id },
            });
        }
        next_id += 1;
    }
    // stable: ties keep generation order
    events.sort_by_key(|e| e.time_ms);
    Ok(events)
}

/// Reads events from a JSON array or from JSON lines. Times must not
/// decrease.
pub fn read_events<R: Read>(reader: R) -> Result<Vec<Event>> {
    let mut text = String::new();
    BufReader::new(reader).read_to_string(&mut text)?;
    let events: Vec<Event> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text)?
    } else {
        text.as_bytes()
            .lines()
            .filter(|l| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
            .map(|l| Ok(serde_json::from_str(&l?)?))
            .collect::<Result<_>>()?
    };
    if events.windows(2).any(|w| w[1].time_ms < w[0].time_ms) {
        return Err(Error::InvalidParameter("events must be time-ordered".into()));
    }
    Ok(events)
}

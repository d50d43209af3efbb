//! Background-traffic adaptation between scheduling epochs.
//!
//! An arriving flow goes to the sub-band with the smallest ratio of its RB
//! demand to free RBs, among sub-bands where the demand is strictly below
//! the free count. If that leaves the sub-band with `th_h` or fewer free
//! RBs, one offload action runs: re-route a camera into the emptiest other
//! sub-band holding at least `th_l` free RBs, or, failing that, drop an
//! unrequired camera from the congested sub-band. Coverage of every object
//! is preserved by both actions.
//!
//! Every mutation here is transactional: an action that does not complete
//! leaves the state exactly as it was.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sched::{mqbs_coverage_phase_from, mqbs_improvement_phase, AllocationMap, ScheduleInstance};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackgroundFlow {
    pub id: u64,
    /// RB demand on each sub-band.
    pub rb_req_per_subband: Vec<u32>,
    #[serde(default)]
    pub assigned_subband: Option<usize>,
    #[serde(default)]
    pub assigned_rbs: Option<u32>,
}

impl BackgroundFlow {
    pub fn new(id: u64, rb_req_per_subband: Vec<u32>) -> Self {
        Self {
            id,
            rb_req_per_subband,
            assigned_subband: None,
            assigned_rbs: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicState {
    pub instance: ScheduleInstance,
    pub alloc: AllocationMap,
    /// Admitted flows, in admission order.
    pub flows: Vec<BackgroundFlow>,
    /// A sub-band with at most this many free RBs is congested.
    pub th_h: u32,
    /// A sub-band needs at least this many free RBs to take offloaded load.
    pub th_l: u32,
}

/// `(ceil(W_m / 4), ceil(W_m / 2))`.
pub fn default_thresholds(rbs_per_subband: u32) -> (u32, u32) {
    (rbs_per_subband.div_ceil(4), rbs_per_subband.div_ceil(2))
}

impl DynamicState {
    pub fn new(instance: ScheduleInstance, alloc: AllocationMap, th_h: u32, th_l: u32) -> Result<Self> {
        let w = instance.spectrum.rbs_per_subband;
        if !(th_h < th_l && th_l <= w) {
            return Err(Error::InvalidParameter(format!(
                "thresholds need 0 <= th_h < th_l <= {w}, got th_h={th_h} th_l={th_l}"
            )));
        }
        if alloc.num_sub_bands() != instance.num_sub_bands()
            || alloc.num_cameras() != instance.num_cameras()
        {
            return Err(Error::Dimension("allocation does not match instance".into()));
        }
        Ok(Self {
            instance,
            alloc,
            flows: Vec::new(),
            th_h,
            th_l,
        })
    }

    /// Runs MQBS on `instance` and wraps the result with default thresholds.
    pub fn from_mqbs(instance: ScheduleInstance) -> Result<Self> {
        let (th_h, th_l) = default_thresholds(instance.spectrum.rbs_per_subband);
        let alloc = crate::sched::schedule_mqbs(&instance)?;
        Self::new(instance, alloc, th_h, th_l)
    }

    pub fn remaining(&self) -> &[u32] {
        &self.alloc.remaining
    }

    pub fn all_covered(&self) -> bool {
        self.alloc
            .covered_objects(&self.instance.scenario)
            .iter()
            .all(|&c| c)
    }

    /// Objects covered by scheduled cameras, ignoring those for which
    /// `skip` returns true.
    fn covered_without(&self, skip: impl Fn(usize) -> bool) -> Vec<bool> {
        let scenario = &self.instance.scenario;
        let mut covered = vec![false; scenario.num_objects()];
        for k in self.alloc.scheduled_cameras() {
            if skip(k) {
                continue;
            }
            for (c, &hit) in covered.iter_mut().zip(&scenario.coverage[k]) {
                *c |= hit;
            }
        }
        covered
    }

    /// Recomputes the camera allocation with MQBS around the admitted
    /// flows, which keep their sub-bands. On failure the state is untouched.
    pub fn run_epoch(&mut self) -> Result<()> {
        let mut base = self.instance.empty_allocation();
        for f in &self.flows {
            let (m, r) = f.assigned_subband.zip(f.assigned_rbs).ok_or_else(|| {
                Error::Precondition(format!("flow {} is not placed", f.id))
            })?;
            base.assign_flow(f.id, m, r)?;
        }
        let cov = mqbs_coverage_phase_from(&self.instance, base)?;
        self.alloc = mqbs_improvement_phase(cov, &self.instance);
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Admitted,
    AdmittedWithReroute,
    AdmittedWithRemoval,
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmitOutcome {
    pub decision: Decision,
    pub candidate_subband: Option<usize>,
    pub offload_subband: Option<usize>,
    pub k_remove: Option<usize>,
    pub k_join: Option<usize>,
}

impl AdmitOutcome {
    fn new(decision: Decision, candidate: Option<usize>) -> Self {
        Self {
            decision,
            candidate_subband: candidate,
            offload_subband: None,
            k_remove: None,
            k_join: None,
        }
    }
}

enum Offload {
    Reroute { k_remove: usize, k_join: usize },
    Removal { k_remove: usize },
}

/// Sub-band minimizing demand / free among those with free > demand.
fn pick_candidate(remaining: &[u32], demand: &[u32]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (m, (&free, &r)) in remaining.iter().zip(demand).enumerate() {
        if free > r {
            let w = f64::from(r) / f64::from(free);
            if best.is_none_or(|(_, b)| w < b) {
                best = Some((m, w));
            }
        }
    }
    best.map(|(m, _)| m)
}

/// Emptiest sub-band other than `candidate` with at least `th_l` free RBs.
fn pick_offload_target(state: &DynamicState, candidate: usize) -> Option<usize> {
    let mut best: Option<(usize, u32)> = None;
    for (m, &free) in state.alloc.remaining.iter().enumerate() {
        if m != candidate && free >= state.th_l && best.is_none_or(|(_, b)| free > b) {
            best = Some((m, free));
        }
    }
    best.map(|(m, _)| m)
}

/// Tries re-routing into the offload target, then removal.
fn offload(state: &mut DynamicState, candidate: usize) -> (Option<usize>, Option<Offload>) {
    let target = pick_offload_target(state, candidate);
    if let Some(o) = target {
        if let Some((k_remove, k_join)) = reroute_camera(state, candidate, o) {
            return (target, Some(Offload::Reroute { k_remove, k_join }));
        }
    }
    let action = remove_camera(state, candidate).map(|k_remove| Offload::Removal { k_remove });
    (target, action)
}

fn record(outcome: &mut AdmitOutcome, target: Option<usize>, action: Option<Offload>) {
    outcome.offload_subband = target;
    match action {
        Some(Offload::Reroute { k_remove, k_join }) => {
            outcome.decision = Decision::AdmittedWithReroute;
            outcome.k_remove = Some(k_remove);
            outcome.k_join = Some(k_join);
        }
        Some(Offload::Removal { k_remove }) => {
            outcome.decision = Decision::AdmittedWithRemoval;
            outcome.k_remove = Some(k_remove);
        }
        None => {}
    }
}

/// Admits a background flow, possibly offloading a congested sub-band.
///
/// When no sub-band can take the flow outright, the sub-band with the most
/// free RBs is offloaded once; if the flow still does not fit the event is
/// rejected and the state is left unchanged.
pub fn admit_background(state: &mut DynamicState, arrival: BackgroundFlow) -> Result<AdmitOutcome> {
    let m_count = state.instance.num_sub_bands();
    let demand = arrival.rb_req_per_subband.clone();
    if demand.len() != m_count || demand.contains(&0) {
        return Err(Error::InvalidParameter(format!(
            "flow {} needs a positive RB demand for each of {m_count} sub-bands",
            arrival.id
        )));
    }
    if state.flows.iter().any(|f| f.id == arrival.id) {
        return Err(Error::InvalidParameter(format!("flow {} already admitted", arrival.id)));
    }

    let place = |state: &mut DynamicState, m: usize| -> Result<()> {
        state.alloc.assign_flow(arrival.id, m, demand[m])?;
        let mut flow = arrival.clone();
        flow.assigned_subband = Some(m);
        flow.assigned_rbs = Some(demand[m]);
        state.flows.push(flow);
        Ok(())
    };

    if let Some(c) = pick_candidate(&state.alloc.remaining, &demand) {
        place(state, c)?;
        let mut outcome = AdmitOutcome::new(Decision::Admitted, Some(c));
        if state.alloc.remaining[c] <= state.th_h {
            let (target, action) = offload(state, c);
            record(&mut outcome, target, action);
        }
        return Ok(outcome);
    }

    // Nothing admits the flow outright: offload the emptiest sub-band once.
    let c = (0..m_count)
        .rev()
        .max_by_key(|&m| state.alloc.remaining[m])
        .expect("at least one sub-band");
    let snapshot = state.clone();
    let (target, action) = offload(state, c);
    if action.is_some() && state.alloc.remaining[c] > demand[c] {
        place(state, c)?;
        let mut outcome = AdmitOutcome::new(Decision::Admitted, Some(c));
        record(&mut outcome, target, action);
        return Ok(outcome);
    }
    *state = snapshot;
    Ok(AdmitOutcome::new(Decision::Rejected, Some(c)))
}

/// Swaps the camera with the largest RB need on `candidate` for an
/// unscheduled camera placed on `offload`. The replacement must cover every
/// object the removed camera alone was covering, needs the fewest RBs on
/// `offload` among such cameras, and must leave more than `th_h` free RBs
/// there. Returns `(k_remove, k_join)`; `None` leaves the state unchanged.
pub fn reroute_camera(state: &mut DynamicState, candidate: usize, offload: usize) -> Option<(usize, usize)> {
    if candidate == offload {
        return None;
    }
    let inst = &state.instance;
    let mut k_remove: Option<(usize, u32)> = None;
    for k in state.alloc.cameras_in(candidate) {
        let r = inst.r(candidate, k).unwrap_or(0);
        if k_remove.is_none_or(|(_, best)| r > best) {
            k_remove = Some((k, r));
        }
    }
    let (k_remove, _) = k_remove?;

    let covered = state.covered_without(|k| k == k_remove);
    let scenario = &inst.scenario;
    let mut k_join: Option<(usize, u32)> = None;
    for k in 0..inst.num_cameras() {
        if state.alloc.is_scheduled(k) {
            continue;
        }
        let patches = covered
            .iter()
            .zip(&scenario.coverage[k])
            .all(|(&c, &hit)| c || hit);
        if !patches {
            continue;
        }
        if let Some(r) = inst.r(offload, k) {
            if k_join.is_none_or(|(_, best)| r < best) {
                k_join = Some((k, r));
            }
        }
    }
    let (k_join, r_join) = k_join?;
    if i64::from(state.alloc.remaining[offload]) - i64::from(r_join) <= i64::from(state.th_h) {
        return None;
    }
    state.alloc.release_camera(k_remove);
    state
        .alloc
        .assign_camera(k_join, offload, r_join)
        .expect("free RBs exceed th_h + r_join");
    Some((k_remove, k_join))
}

/// Drops the lowest-quality camera on `candidate` that is not needed for
/// coverage. Cameras are considered for the "required" mark in descending
/// order of how many objects they cover. Returns the removed camera;
/// `None` (every camera required, or none present) leaves the state
/// unchanged.
pub fn remove_camera(state: &mut DynamicState, candidate: usize) -> Option<usize> {
    let inst = &state.instance;
    let scenario = &inst.scenario;
    let mut listed = state.alloc.cameras_in(candidate);
    if listed.is_empty() {
        return None;
    }
    let mut covered = state.covered_without(|k| state.alloc.x[candidate][k] != 0);
    let sizes: Vec<usize> = listed
        .iter()
        .map(|&k| scenario.coverage[k].iter().filter(|&&c| c).count())
        .collect();
    let mut order: Vec<usize> = (0..listed.len()).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(listed[a].cmp(&listed[b])));
    listed = order.into_iter().map(|i| listed[i]).collect();

    let mut required = vec![false; listed.len()];
    for n in 0..scenario.num_objects() {
        if covered[n] {
            continue;
        }
        if let Some(i) = listed.iter().position(|&k| scenario.covers(k, n)) {
            required[i] = true;
            for (c, &hit) in covered.iter_mut().zip(&scenario.coverage[listed[i]]) {
                *c |= hit;
            }
        }
    }

    let k_remove = listed
        .iter()
        .zip(&required)
        .filter(|(_, &req)| !req)
        .map(|(&k, _)| k)
        .min_by(|&a, &b| inst.quality(a).total_cmp(&inst.quality(b)).then(a.cmp(&b)))?;
    state.alloc.release_camera(k_remove);
    Some(k_remove)
}

/// Returns a departing flow's RBs. No camera is added in its place.
pub fn release_background(state: &mut DynamicState, flow_id: u64) -> Result<()> {
    let idx = state
        .flows
        .iter()
        .position(|f| f.id == flow_id)
        .ok_or(Error::UnknownFlow(flow_id))?;
    state.alloc.release_flow(flow_id);
    state.flows.remove(idx);
    Ok(())
}

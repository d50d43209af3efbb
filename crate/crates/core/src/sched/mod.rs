//! Static schedulers and the allocation model they share.
//!
//! Both schedulers are greedy and break every tie toward the lowest camera
//! index, then the lowest sub-band index. A camera with no usable MCS on a
//! sub-band is never placed there.

mod alloc;
mod baseline;
mod mqbs;
mod validate;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelState, SpectrumConfig};
use crate::error::{Error, Result};
use crate::scenario::Scenario;

pub use alloc::{objective_value, place_contiguous, AllocationMap, Occupant, RbRange};
pub use baseline::{baseline_coverage_phase, baseline_fill_phase, schedule_baseline};
pub use mqbs::{mqbs_coverage_phase, mqbs_coverage_phase_from, mqbs_improvement_phase, schedule_mqbs};
pub use validate::{validate_allocation, Violation};

/// Everything a scheduler needs: qualities and coverage, RB requirements
/// and the spectrum layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleInstance {
    pub scenario: Scenario,
    pub channel: ChannelState,
    pub spectrum: SpectrumConfig,
}

impl ScheduleInstance {
    pub fn new(scenario: Scenario, channel: ChannelState, spectrum: SpectrumConfig) -> Result<Self> {
        let inst = Self {
            scenario,
            channel,
            spectrum,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        self.spectrum.validate()?;
        self.scenario.validate()?;
        self.channel
            .validate(self.spectrum.num_sub_bands(), self.scenario.num_cameras())
    }

    pub fn num_cameras(&self) -> usize {
        self.scenario.num_cameras()
    }

    pub fn num_objects(&self) -> usize {
        self.scenario.num_objects()
    }

    pub fn num_sub_bands(&self) -> usize {
        self.spectrum.num_sub_bands()
    }

    #[inline]
    pub fn r(&self, sub_band: usize, camera: usize) -> Option<u32> {
        self.channel.r(sub_band, camera)
    }

    #[inline]
    pub fn quality(&self, camera: usize) -> f64 {
        self.scenario.qualities[camera]
    }

    pub fn empty_allocation(&self) -> AllocationMap {
        AllocationMap::empty(&self.spectrum, self.num_cameras())
    }

    /// Sub-band where `camera` needs the fewest RBs among those with room,
    /// lowest index on ties.
    pub fn cheapest_fit(&self, camera: usize, remaining: &[u32]) -> Option<(usize, u32)> {
        let mut best: Option<(usize, u32)> = None;
        for (m, &free) in remaining.iter().enumerate() {
            if let Some(r) = self.r(m, camera) {
                if r <= free && best.is_none_or(|(_, b)| r < b) {
                    best = Some((m, r));
                }
            }
        }
        best
    }

    fn require_coverable(&self) -> Result<()> {
        let uncovered = self.scenario.uncovered_objects();
        if uncovered.is_empty() {
            Ok(())
        } else {
            Err(Error::Infeasible { uncovered })
        }
    }
}

/// Marks every object `camera` covers.
fn fold_coverage(covered: &mut [bool], scenario: &Scenario, camera: usize) {
    for (c, &hit) in covered.iter_mut().zip(&scenario.coverage[camera]) {
        *c |= hit;
    }
}

fn uncovered_list(covered: &[bool]) -> Vec<usize> {
    covered
        .iter()
        .enumerate()
        .filter_map(|(n, &c)| (!c).then_some(n))
        .collect()
}

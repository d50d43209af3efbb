//! Channel-first greedy: always serve the camera that needs the fewest RBs.

use super::{fold_coverage, uncovered_list, AllocationMap, ScheduleInstance};
use crate::error::{Error, Result};

/// While objects remain uncovered, schedules the cheapest camera (fewest
/// RBs over sub-bands with room) among unscheduled cameras that cover at
/// least one uncovered object.
pub fn baseline_coverage_phase(inst: &ScheduleInstance) -> Result<AllocationMap> {
    inst.require_coverable()?;
    let scenario = &inst.scenario;
    let mut alloc = inst.empty_allocation();
    let mut covered = vec![false; inst.num_objects()];

    while covered.iter().any(|c| !c) {
        let mut pick: Option<(usize, usize, u32)> = None;
        for k in 0..inst.num_cameras() {
            if alloc.is_scheduled(k) {
                continue;
            }
            let helps = scenario.coverage[k]
                .iter()
                .zip(&covered)
                .any(|(&hit, &c)| hit && !c);
            if !helps {
                continue;
            }
            if let Some((m, r)) = inst.cheapest_fit(k, &alloc.remaining) {
                if pick.is_none_or(|(_, _, best)| r < best) {
                    pick = Some((k, m, r));
                }
            }
        }
        let Some((k, m, r)) = pick else {
            return Err(Error::Infeasible {
                uncovered: uncovered_list(&covered),
            });
        };
        alloc.assign_camera(k, m, r)?;
        fold_coverage(&mut covered, scenario, k);
    }
    Ok(alloc)
}

/// Keeps adding the cheapest unscheduled camera until nothing fits.
pub fn baseline_fill_phase(mut alloc: AllocationMap, inst: &ScheduleInstance) -> AllocationMap {
    loop {
        let mut pick: Option<(usize, usize, u32)> = None;
        for k in 0..inst.num_cameras() {
            if alloc.is_scheduled(k) {
                continue;
            }
            if let Some((m, r)) = inst.cheapest_fit(k, &alloc.remaining) {
                if pick.is_none_or(|(_, _, best)| r < best) {
                    pick = Some((k, m, r));
                }
            }
        }
        match pick {
            Some((k, m, r)) => alloc
                .assign_camera(k, m, r)
                .expect("cheapest_fit only returns sub-bands with room"),
            None => return alloc,
        }
    }
}

pub fn schedule_baseline(inst: &ScheduleInstance) -> Result<AllocationMap> {
    let alloc = baseline_coverage_phase(inst)?;
    Ok(baseline_fill_phase(alloc, inst))
}

//! Monitoring-quality based scheduling.
//!
//! Coverage assurance walks objects in index order; each uncovered object
//! pulls in the covering camera with the highest quality, placed on the
//! sub-band where it needs the fewest RBs. Quality improvement then offers
//! the leftover RBs to the remaining cameras in descending quality order.

use std::cmp::Ordering;

use super::{fold_coverage, uncovered_list, AllocationMap, ScheduleInstance};
use crate::error::{Error, Result};

/// Descending quality, ascending index.
fn by_quality_desc(inst: &ScheduleInstance) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    |&a, &b| inst.quality(b).total_cmp(&inst.quality(a)).then(a.cmp(&b))
}

pub fn mqbs_coverage_phase(inst: &ScheduleInstance) -> Result<AllocationMap> {
    mqbs_coverage_phase_from(inst, inst.empty_allocation())
}

/// Coverage assurance starting from an existing allocation (cameras or
/// background flows already placed). Objects covered by cameras already in
/// `alloc` count as covered.
///
/// If the best camera for an object fits no sub-band, the next best
/// covering camera is tried; the phase fails only when none fits.
pub fn mqbs_coverage_phase_from(inst: &ScheduleInstance, mut alloc: AllocationMap) -> Result<AllocationMap> {
    inst.require_coverable()?;
    let scenario = &inst.scenario;
    let mut covered = alloc.covered_objects(scenario);

    for n in 0..inst.num_objects() {
        if covered[n] {
            continue;
        }
        let mut candidates: Vec<usize> = (0..inst.num_cameras())
            .filter(|&k| scenario.covers(k, n) && !alloc.is_scheduled(k))
            .collect();
        candidates.sort_by(by_quality_desc(inst));
        let choice = candidates
            .into_iter()
            .find_map(|k| inst.cheapest_fit(k, &alloc.remaining).map(|(m, r)| (k, m, r)));
        let Some((k, m, r)) = choice else {
            return Err(Error::Infeasible {
                uncovered: uncovered_list(&covered),
            });
        };
        alloc.assign_camera(k, m, r)?;
        fold_coverage(&mut covered, scenario, k);
    }
    Ok(alloc)
}

/// Offers leftover RBs to unscheduled cameras by descending quality. A
/// camera that fits nowhere is skipped for good.
pub fn mqbs_improvement_phase(mut alloc: AllocationMap, inst: &ScheduleInstance) -> AllocationMap {
    let mut waiting: Vec<usize> = (0..inst.num_cameras())
        .filter(|&k| !alloc.is_scheduled(k))
        .collect();
    waiting.sort_by(by_quality_desc(inst));
    for k in waiting {
        if let Some((m, r)) = inst.cheapest_fit(k, &alloc.remaining) {
            alloc
                .assign_camera(k, m, r)
                .expect("cheapest_fit only returns sub-bands with room");
        }
    }
    alloc
}

pub fn schedule_mqbs(inst: &ScheduleInstance) -> Result<AllocationMap> {
    let alloc = mqbs_coverage_phase(inst)?;
    Ok(mqbs_improvement_phase(alloc, inst))
}

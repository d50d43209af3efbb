//! Exact solver for small instances.
//!
//! Depth-first branch and bound over one decision per camera: a sub-band
//! or "not scheduled". Cameras are branched in descending quality order,
//! sub-bands in ascending index order with "not scheduled" tried last.
//! Three prunes apply:
//!
//! * quality bound: current objective plus the qualities of all undecided
//!   cameras cannot beat the incumbent;
//! * capacity: a sub-band branch is skipped when the camera does not fit;
//! * coverage reachability: leaving a camera out is skipped when some
//!   object would be left with no scheduled or undecided camera covering it.
//!
//! Contiguity needs no search: any multiset of per-camera RB counts whose
//! sum fits a sub-band can be left-packed into contiguous disjoint ranges,
//! so optimizing over `x[m][k]` alone is exact for the physical problem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sched::{objective_value, AllocationMap, ScheduleInstance};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactSolution {
    pub z_star: f64,
    pub x_star: Vec<Vec<u8>>,
    /// Physical realization of `x_star`, cameras packed in index order.
    pub alloc: AllocationMap,
    /// False when the node budget ran out first; the solution is then the
    /// best found so far.
    pub proven_optimal: bool,
    pub nodes_explored: u64,
}

struct Search<'a> {
    inst: &'a ScheduleInstance,
    order: Vec<usize>,
    /// Sum of non-negative qualities of `order[i..]`.
    suffix_bound: Vec<f64>,
    cover_lists: Vec<Vec<usize>>,
    remaining: Vec<u32>,
    choice: Vec<Option<usize>>,
    scheduled_cover: Vec<u32>,
    reachable_cover: Vec<u32>,
    z: f64,
    best: Option<(f64, Vec<Option<usize>>)>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        if depth == self.order.len() {
            if self.scheduled_cover.iter().all(|&c| c > 0)
                && self.best.as_ref().is_none_or(|(b, _)| self.z > *b)
            {
                self.best = Some((self.z, self.choice.clone()));
            }
            return;
        }
        if let Some((b, _)) = &self.best {
            if self.z + self.suffix_bound[depth] <= *b {
                return;
            }
        }

        let k = self.order[depth];
        let q = self.inst.quality(k);
        for m in 0..self.remaining.len() {
            let Some(r) = self.inst.r(m, k) else { continue };
            if r > self.remaining[m] {
                continue;
            }
            self.remaining[m] -= r;
            self.choice[k] = Some(m);
            self.z += q;
            for &n in &self.cover_lists[k] {
                self.scheduled_cover[n] += 1;
            }
            self.dfs(depth + 1);
            for &n in &self.cover_lists[k] {
                self.scheduled_cover[n] -= 1;
            }
            self.z -= q;
            self.choice[k] = None;
            self.remaining[m] += r;
            if self.aborted {
                return;
            }
        }

        let mut reachable = true;
        for &n in &self.cover_lists[k] {
            self.reachable_cover[n] -= 1;
            reachable &= self.reachable_cover[n] > 0;
        }
        if reachable {
            self.dfs(depth + 1);
        }
        for &n in &self.cover_lists[k] {
            self.reachable_cover[n] += 1;
        }
    }
}

/// Maximizes total quality subject to one sub-band per camera, full
/// coverage and per-sub-band capacity. `budget` caps visited nodes.
pub fn solve_exact(inst: &ScheduleInstance, budget: u64) -> Result<ExactSolution> {
    inst.validate()?;
    let k_count = inst.num_cameras();
    let mut order: Vec<usize> = (0..k_count).collect();
    order.sort_by(|&a, &b| inst.quality(b).total_cmp(&inst.quality(a)).then(a.cmp(&b)));
    let mut suffix_bound = vec![0.0; k_count + 1];
    for i in (0..k_count).rev() {
        suffix_bound[i] = suffix_bound[i + 1] + inst.quality(order[i]).max(0.0);
    }
    let cover_lists: Vec<Vec<usize>> = (0..k_count).map(|k| inst.scenario.coverage_set(k)).collect();
    let mut reachable_cover = vec![0u32; inst.num_objects()];
    for list in &cover_lists {
        for &n in list {
            reachable_cover[n] += 1;
        }
    }
    let uncoverable = inst.scenario.uncovered_objects();
    if !uncoverable.is_empty() {
        return Err(Error::Infeasible {
            uncovered: uncoverable,
        });
    }

    let mut search = Search {
        inst,
        order,
        suffix_bound,
        cover_lists,
        remaining: vec![inst.spectrum.rbs_per_subband; inst.num_sub_bands()],
        choice: vec![None; k_count],
        scheduled_cover: vec![0; inst.num_objects()],
        reachable_cover,
        z: 0.0,
        best: None,
        nodes: 0,
        budget,
        aborted: false,
    };
    search.dfs(0);

    let Some((_, choice)) = search.best else {
        return Err(if search.aborted {
            Error::BudgetExhausted { budget }
        } else {
            Error::Infeasible { uncovered: Vec::new() }
        });
    };
    let mut alloc = inst.empty_allocation();
    for (k, m) in choice.iter().enumerate() {
        if let Some(m) = *m {
            let r = inst.r(m, k).expect("search only uses usable sub-bands");
            alloc.assign_camera(k, m, r)?;
        }
    }
    Ok(ExactSolution {
        z_star: objective_value(&alloc, &inst.scenario),
        x_star: alloc.x.clone(),
        alloc,
        proven_optimal: !search.aborted,
        nodes_explored: search.nodes,
    })
}

#![allow(dead_code)]

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use survsched::channel::{ChannelState, SpectrumConfig};
use survsched::scenario::Scenario;
use survsched::dynamic::DynamicState;
use survsched::sched::{AllocationMap, ScheduleInstance};

/// Exhaustive search over every camera -> {sub-band, unscheduled} map.
/// Returns the best objective, or `None` when nothing is feasible.
pub fn naive_optimum(inst: &ScheduleInstance) -> Option<f64> {
    let k_count = inst.num_cameras();
    let m_count = inst.num_sub_bands();
    let w = inst.spectrum.rbs_per_subband;
    let options = (m_count + 1) as u64;
    let total = options.pow(k_count as u32);
    let mut best: Option<f64> = None;
    let mut choice = vec![0usize; k_count];
    'outer: for code in 0..total {
        let mut c = code;
        for slot in choice.iter_mut() {
            *slot = (c % options) as usize;
            c /= options;
        }
        let mut used = vec![0u32; m_count];
        let mut covered = vec![false; inst.num_objects()];
        let mut z = 0.0;
        for (k, &ch) in choice.iter().enumerate() {
            if ch == m_count {
                continue;
            }
            let Some(r) = inst.r(ch, k) else { continue 'outer };
            used[ch] += r;
            z += inst.quality(k);
            for (cv, &hit) in covered.iter_mut().zip(&inst.scenario.coverage[k]) {
                *cv |= hit;
            }
        }
        if used.iter().any(|&u| u > w) || covered.iter().any(|&c| !c) {
            continue;
        }
        if best.is_none_or(|b| z > b) {
            best = Some(z);
        }
    }
    best
}

/// Small abstract instance: every object has at least one covering camera,
/// some (camera, sub-band) cells may be unusable.
pub fn random_table_instance(
    seed: u64,
    cameras: RangeInclusive<usize>,
    sub_bands: RangeInclusive<u32>,
    objects: RangeInclusive<usize>,
) -> ScheduleInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k_count = rng.random_range(cameras);
    let m_count = rng.random_range(sub_bands);
    let n_count = rng.random_range(objects);
    let w = rng.random_range(2..=8u32);

    let mut cover_sets: Vec<Vec<usize>> = (0..k_count)
        .map(|_| (0..n_count).filter(|_| rng.random_bool(0.35)).collect())
        .collect();
    for n in 0..n_count {
        if !cover_sets.iter().any(|s| s.contains(&n)) {
            let k = rng.random_range(0..k_count);
            cover_sets[k].push(n);
            cover_sets[k].sort_unstable();
        }
    }
    // quarter steps keep sums exact in floating point
    let qualities = (0..k_count)
        .map(|_| f64::from(rng.random_range(0..=40u32)) / 4.0)
        .collect();
    let rb_req = (0..m_count)
        .map(|_| {
            (0..k_count)
                .map(|_| {
                    if rng.random_bool(0.1) {
                        None
                    } else {
                        Some(rng.random_range(1..=w))
                    }
                })
                .collect()
        })
        .collect();
    let scenario = Scenario::from_tables(n_count, &cover_sets, qualities).unwrap();
    let channel = ChannelState {
        sinr_db: None,
        mcs: None,
        rb_req,
    };
    let spectrum = SpectrumConfig::new(w * m_count, m_count).unwrap();
    ScheduleInstance::new(scenario, channel, spectrum).unwrap()
}

/// Sub-band of each camera as a plain vector.
pub fn assignment(alloc: &AllocationMap) -> Vec<Option<usize>> {
    (0..alloc.num_cameras()).map(|k| alloc.sub_band_of(k)).collect()
}

/// Camera row for hand-built dynamic states: coverage set, quality, RB
/// need per sub-band, and the sub-band it starts on.
pub struct Cam {
    cover: Vec<usize>,
    q: f64,
    rb: Vec<u32>,
    on: Option<usize>,
}

pub fn cam(cover: &[usize], q: f64, rb: &[u32], on: Option<usize>) -> Cam {
    Cam {
        cover: cover.to_vec(),
        q,
        rb: rb.to_vec(),
        on,
    }
}

/// `W = w` per sub-band; sub-band count taken from the first camera row.
pub fn state(w: u32, objects: usize, cams: &[Cam], th_h: u32, th_l: u32) -> DynamicState {
    let m = cams[0].rb.len() as u32;
    let cover: Vec<Vec<usize>> = cams.iter().map(|c| c.cover.clone()).collect();
    let scenario = Scenario::from_tables(objects, &cover, cams.iter().map(|c| c.q).collect()).unwrap();
    let rows: Vec<Vec<u32>> = cams.iter().map(|c| c.rb.clone()).collect();
    let channel = ChannelState::from_camera_rows(&rows).unwrap();
    let inst = ScheduleInstance::new(scenario, channel, SpectrumConfig::new(w * m, m).unwrap()).unwrap();
    let mut alloc = inst.empty_allocation();
    for (k, c) in cams.iter().enumerate() {
        if let Some(sb) = c.on {
            alloc.assign_camera(k, sb, c.rb[sb]).unwrap();
        }
    }
    DynamicState::new(inst, alloc, th_h, th_l).unwrap()
}

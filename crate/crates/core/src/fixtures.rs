//! Hand-built instances.

use crate::channel::{ChannelState, SpectrumConfig};
use crate::sched::ScheduleInstance;
use crate::scenario::Scenario;

/// Seven cameras, six objects, three sub-bands of five RBs. RB
/// requirements, coverage sets and qualities are given directly (equal
/// camera data rates). Indices are 0-based: camera `k` here is "Camera{k+1}".
pub fn table1_instance() -> ScheduleInstance {
    let rb_rows = [
        vec![5, 3, 5],
        vec![4, 5, 3],
        vec![4, 4, 4],
        vec![3, 4, 3],
        vec![4, 3, 5],
        vec![2, 2, 2],
        vec![4, 4, 4],
    ];
    // 1-based object ids as printed in the table
    let cover: [&[usize]; 7] = [
        &[2, 5],
        &[1, 2, 4],
        &[1, 4, 5],
        &[5, 6],
        &[2, 3, 4],
        &[1, 3],
        &[4, 5, 6],
    ];
    let qualities = vec![4.0, 5.0, 7.0, 3.0, 6.0, 3.0, 5.0];
    let cover_sets: Vec<Vec<usize>> = cover
        .iter()
        .map(|s| s.iter().map(|n| n - 1).collect())
        .collect();
    let scenario = Scenario::from_tables(6, &cover_sets, qualities).expect("static table");
    let channel = ChannelState::from_camera_rows(&rb_rows).expect("static table");
    let spectrum = SpectrumConfig::new(15, 3).expect("static table");
    ScheduleInstance::new(scenario, channel, spectrum).expect("static table")
}

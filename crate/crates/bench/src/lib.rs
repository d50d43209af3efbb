//! Instance builders shared by the criterion benches.

use survsched::harness::{build_instance, InstanceParams};
use survsched::ScheduleInstance;

/// Default-cell instance with `objects` objects, retrying seeds until the
/// generator and channel give a coverable instance.
pub fn default_cell(cameras: usize, objects: usize, seed: u64) -> ScheduleInstance {
    let mut p = InstanceParams::default();
    p.scenario.cameras = cameras;
    p.scenario.objects = objects;
    (seed..)
        .find_map(|s| build_instance(&p, s).ok())
        .expect("some seed yields an instance")
}

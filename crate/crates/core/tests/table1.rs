mod common;

use common::{assignment, naive_optimum};
use survsched::fixtures::table1_instance;
use survsched::harness::PointRecord;
use survsched::oracle::{solve_exact, DEFAULT_NODE_BUDGET};
use survsched::sched::{
    mqbs_coverage_phase, objective_value, schedule_baseline, schedule_mqbs, validate_allocation,
    Occupant, Violation,
};
use survsched::ScheduleInstance;

#[test]
fn baseline_matches_hand_schedule() {
    let inst = table1_instance();
    let alloc = schedule_baseline(&inst).unwrap();
    assert_eq!(
        assignment(&alloc),
        vec![Some(1), Some(2), None, Some(0), None, Some(0), None]
    );
    let rb = |k| {
        let r = alloc.range_of(Occupant::Camera(k)).unwrap();
        (r.sub_band, r.first_rb, r.rb_count)
    };
    assert_eq!(rb(5), (0, 0, 2));
    assert_eq!(rb(3), (0, 2, 3));
    assert_eq!(rb(0), (1, 0, 3));
    assert_eq!(rb(1), (2, 0, 3));
    assert_eq!(objective_value(&alloc, &inst.scenario), 15.0);
    assert!(validate_allocation(&alloc, &inst).is_empty());
}

#[test]
fn mqbs_matches_hand_schedule() {
    let inst = table1_instance();
    let cov = mqbs_coverage_phase(&inst).unwrap();
    assert_eq!(cov.remaining, vec![1, 2, 1]);
    assert_eq!(objective_value(&cov, &inst.scenario), 18.0);

    let alloc = schedule_mqbs(&inst).unwrap();
    assert_eq!(
        assignment(&alloc),
        vec![None, None, Some(0), None, Some(1), Some(1), Some(2)]
    );
    assert_eq!(alloc.remaining, vec![1, 0, 1]);
    assert_eq!(objective_value(&alloc, &inst.scenario), 21.0);
    assert!(validate_allocation(&alloc, &inst).is_empty());
}

#[test]
fn grid_uses_printed_labels() {
    let inst = table1_instance();
    let grid = schedule_mqbs(&inst).unwrap().render_grid();
    assert!(grid.contains("Camera3"), "{grid}");
    assert!(grid.contains("Sub-band 1"), "{grid}");
}

#[test]
fn oracle_agrees_with_enumeration() {
    let inst = table1_instance();
    let sol = solve_exact(&inst, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(sol.z_star, 21.0);
    assert!(sol.proven_optimal);
    assert_eq!(naive_optimum(&inst), Some(21.0));
    assert!(validate_allocation(&sol.alloc, &inst).is_empty());
    assert_eq!(objective_value(&sol.alloc, &inst.scenario), sol.z_star);
}

#[test]
fn point_metrics() {
    let rec = PointRecord::evaluate(&table1_instance()).unwrap();
    assert_eq!(rec.mqbs.min_rb, 11);
    assert_eq!(rec.mqbs.q_min_rb, 18.0);
    assert_eq!(rec.mqbs.q_all, 21.0);
    assert_eq!(rec.baseline.min_rb, 11);
    assert_eq!(rec.baseline.q_min_rb, 15.0);
    assert_eq!(rec.baseline.q_all, 15.0);
}

#[test]
fn validator_flags_two_sub_bands() {
    let inst = table1_instance();
    let mut alloc = schedule_mqbs(&inst).unwrap();
    // camera 3 (index 2) also marked on sub-band 2
    alloc.x[1][2] = 1;
    let v = validate_allocation(&alloc, &inst);
    assert!(
        v.iter().any(|v| matches!(v, Violation::MultipleSubBands { camera: 2, .. })),
        "{v:?}"
    );
}

#[test]
fn validator_flags_uncovered_object() {
    let inst = table1_instance();
    let mut alloc = schedule_mqbs(&inst).unwrap();
    alloc.release_camera(6);
    let v = validate_allocation(&alloc, &inst);
    assert_eq!(v, vec![Violation::Uncovered { object: 5 }]);
}

#[test]
fn fixture_file_matches_builder() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/table1.json");
    let text = std::fs::read_to_string(path).unwrap();
    let inst: ScheduleInstance = serde_json::from_str(&text).unwrap();
    assert_eq!(inst, table1_instance());
}

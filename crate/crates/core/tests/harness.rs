use survsched::fixtures::table1_instance;
use survsched::harness::{
    generate_events, read_events, run_sweep, run_timeline, write_csv, write_log, Event, EventKind,
    ExperimentConfig, LogKind, SweepVariable, TimelineConfig, TrafficConfig, CSV_HEADER,
};
use survsched::channel::{ChannelState, SpectrumConfig};
use survsched::dynamic::Decision;
use survsched::scenario::Scenario;
use survsched::ScheduleInstance;

fn arrival(t: u64, id: u64, rb_req: Vec<u32>) -> Event {
    Event {
        time_ms: t,
        kind: EventKind::Arrival { flow_id: id, rb_req },
    }
}

fn departure(t: u64, id: u64) -> Event {
    Event {
        time_ms: t,
        kind: EventKind::Departure { flow_id: id },
    }
}

#[test]
fn empty_trace_logs_only_epochs() {
    let cfg = TimelineConfig {
        horizon_ms: Some(30_000),
        ..Default::default()
    };
    let (log, _) = run_timeline(table1_instance(), &[], &cfg).unwrap();
    assert_eq!(log.len(), 4);
    assert!(log.iter().all(|r| r.kind == LogKind::Epoch && r.error.is_none()));
    assert_eq!(
        log.iter().map(|r| r.time_ms).collect::<Vec<_>>(),
        vec![0, 10_000, 20_000, 30_000]
    );
}

fn roomy_instance() -> ScheduleInstance {
    let scenario = Scenario::from_tables(2, &[vec![0], vec![1]], vec![2.0, 1.0]).unwrap();
    let channel = ChannelState::from_camera_rows(&[vec![2, 3], vec![3, 2]]).unwrap();
    ScheduleInstance::new(scenario, channel, SpectrumConfig::new(24, 2).unwrap()).unwrap()
}

#[test]
fn transient_flow_leaves_post_epoch_capacity() {
    let events = vec![arrival(2_000, 0, vec![1, 1]), departure(4_000, 0)];
    let cfg = TimelineConfig {
        horizon_ms: Some(9_000),
        ..Default::default()
    };
    let (log, state) = run_timeline(roomy_instance(), &events, &cfg).unwrap();
    assert_eq!(log.len(), 3);
    assert_eq!(log[1].outcome.as_ref().unwrap().decision, Decision::Admitted);
    assert_ne!(log[1].remaining, log[0].remaining);
    assert_eq!(state.remaining(), log[0].remaining.as_slice());
}

#[test]
fn overflowing_arrival_is_logged_as_rejected() {
    // every sub-band of the seven-camera schedule is nearly full and all
    // cameras on them are needed
    let events = vec![arrival(1, 0, vec![5, 5, 5])];
    let (log, state) = run_timeline(table1_instance(), &events, &TimelineConfig::default()).unwrap();
    let rec = &log[1];
    assert_eq!(rec.outcome.as_ref().unwrap().decision, Decision::Rejected);
    assert_eq!(rec.remaining, log[0].remaining);
    assert_eq!(rec.assignment, log[0].assignment);
    assert!(state.flows.is_empty());
}

#[test]
fn epoch_runs_before_simultaneous_event() {
    let events = vec![arrival(10_000, 0, vec![1, 1, 1])];
    let (log, _) = run_timeline(table1_instance(), &events, &TimelineConfig::default()).unwrap();
    let kinds: Vec<_> = log.iter().map(|r| (r.time_ms, r.kind)).collect();
    assert_eq!(
        kinds,
        vec![(0, LogKind::Epoch), (10_000, LogKind::Epoch), (10_000, LogKind::Arrival)]
    );
}

#[test]
fn departure_of_unknown_flow_is_logged() {
    let (log, _) =
        run_timeline(table1_instance(), &[departure(5, 42)], &TimelineConfig::default()).unwrap();
    assert!(log[1].error.as_deref().unwrap().contains("42"));
}

#[test]
fn generated_timeline_is_reproducible() {
    let inst = table1_instance();
    let traffic = TrafficConfig {
        seed: 11,
        horizon_ms: 40_000,
        ..Default::default()
    };
    let events = generate_events(&traffic, &inst.spectrum).unwrap();
    let mut json = Vec::new();
    serde_json::to_writer(&mut json, &events).unwrap();
    assert_eq!(read_events(json.as_slice()).unwrap(), events);

    let render = || {
        let (log, _) = run_timeline(inst.clone(), &events, &TimelineConfig::default()).unwrap();
        let mut out = Vec::new();
        write_log(&log, &mut out).unwrap();
        out
    };
    let a = render();
    assert_eq!(a, render());
    assert!(!a.is_empty());
}

fn quick_config(var: SweepVariable) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(var);
    cfg.runs_per_point = 6;
    cfg.base_seed = 5;
    cfg
}

#[test]
fn sweep_rows_and_csv_are_stable() {
    let cfg = quick_config(SweepVariable::Objects);
    let rows = run_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.runs == 6 && r.feasible_frac > 0.0 && r.feasible_frac <= 1.0));

    let mut a = Vec::new();
    write_csv(&rows, &mut a).unwrap();
    let mut b = Vec::new();
    write_csv(&run_sweep(&cfg).unwrap(), &mut b).unwrap();
    assert_eq!(a, b);

    let text = String::from_utf8(a).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
    assert_eq!(lines.count(), 12);
}

#[test]
fn single_run_point_has_no_spread() {
    let mut cfg = quick_config(SweepVariable::Cameras);
    cfg.runs_per_point = 1;
    cfg.sweep_values = vec![50.0];
    let rows = run_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.min_rb_ci95 == 0.0 && r.q_all_ci95 == 0.0));
}

#[test]
fn unsorted_sweep_values_rejected() {
    let mut cfg = quick_config(SweepVariable::Angle);
    cfg.sweep_values = vec![120.0, 90.0];
    assert!(run_sweep(&cfg).is_err());
}

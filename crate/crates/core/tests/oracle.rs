mod common;

use common::{naive_optimum, random_table_instance};
use survsched::channel::{ChannelState, SpectrumConfig};
use survsched::oracle::{solve_exact, DEFAULT_NODE_BUDGET};
use survsched::scenario::Scenario;
use survsched::sched::{objective_value, schedule_baseline, schedule_mqbs, validate_allocation};
use survsched::{Error, ScheduleInstance};

#[test]
fn matches_enumeration_on_random_tables() {
    let mut feasible = 0;
    for seed in 0..400 {
        let inst = random_table_instance(seed, 1..=7, 1..=3, 1..=6);
        let naive = naive_optimum(&inst);
        match solve_exact(&inst, DEFAULT_NODE_BUDGET) {
            Ok(sol) => {
                feasible += 1;
                assert!(sol.proven_optimal);
                assert_eq!(Some(sol.z_star), naive, "seed {seed}");
                assert!(validate_allocation(&sol.alloc, &inst).is_empty(), "seed {seed}");
                assert_eq!(objective_value(&sol.alloc, &inst.scenario), sol.z_star);
            }
            Err(Error::Infeasible { .. }) => assert_eq!(naive, None, "seed {seed}"),
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    assert!(feasible > 100, "only {feasible} feasible draws");
}

#[test]
fn dominates_both_heuristics() {
    for seed in 1000..1400 {
        let inst = random_table_instance(seed, 1..=8, 1..=3, 1..=8);
        let Ok(sol) = solve_exact(&inst, DEFAULT_NODE_BUDGET) else {
            continue;
        };
        for alloc in [schedule_mqbs(&inst), schedule_baseline(&inst)].into_iter().flatten() {
            assert!(objective_value(&alloc, &inst.scenario) <= sol.z_star, "seed {seed}");
        }
    }
}

#[test]
fn adding_a_camera_never_lowers_the_optimum() {
    for seed in 2000..2200 {
        let inst = random_table_instance(seed, 1..=6, 1..=3, 1..=5);
        let Ok(before) = solve_exact(&inst, DEFAULT_NODE_BUDGET) else {
            continue;
        };
        // extra camera covering object 0 with quality 1, cost 1 everywhere
        let mut cover = inst.scenario.coverage.clone();
        let mut extra = vec![false; inst.num_objects()];
        extra[0] = true;
        cover.push(extra);
        let mut q = inst.scenario.qualities.clone();
        q.push(1.0);
        let scenario = Scenario {
            geometry: None,
            coverage: cover,
            qualities: q,
        };
        let mut rb_req = inst.channel.rb_req.clone();
        for row in &mut rb_req {
            row.push(Some(1));
        }
        let channel = ChannelState {
            sinr_db: None,
            mcs: None,
            rb_req,
        };
        let bigger = ScheduleInstance::new(scenario, channel, inst.spectrum).unwrap();
        let after = solve_exact(&bigger, DEFAULT_NODE_BUDGET).unwrap();
        assert!(after.z_star >= before.z_star, "seed {seed}");
    }
}

#[test]
fn single_camera_optimum_is_its_quality() {
    let s = Scenario::from_tables(1, &[vec![0]], vec![2.5]).unwrap();
    let c = ChannelState::from_camera_rows(&[vec![3, 4]]).unwrap();
    let inst = ScheduleInstance::new(s, c, SpectrumConfig::new(8, 2).unwrap()).unwrap();
    let sol = solve_exact(&inst, DEFAULT_NODE_BUDGET).unwrap();
    assert_eq!(sol.z_star, 2.5);
    assert_eq!(sol.alloc.sub_band_of(0), Some(0));
}

#[test]
fn budget_exhaustion_is_reported() {
    let inst = survsched::fixtures::table1_instance();
    let full = solve_exact(&inst, DEFAULT_NODE_BUDGET).unwrap();
    assert!(full.proven_optimal);
    // too few nodes to reach any leaf
    assert!(matches!(solve_exact(&inst, 3), Err(Error::BudgetExhausted { budget: 3 })));
    let mut saw_incumbent = false;
    for budget in 8..full.nodes_explored {
        if let Ok(sol) = solve_exact(&inst, budget) {
            assert!(!sol.proven_optimal, "budget {budget}");
            assert!(sol.z_star <= full.z_star);
            assert!(validate_allocation(&sol.alloc, &inst).is_empty());
            saw_incumbent = true;
        }
    }
    assert!(saw_incumbent);
}

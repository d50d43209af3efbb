use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_instance, InstanceParams};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::sched::{
    baseline_coverage_phase, baseline_fill_phase, mqbs_coverage_phase, mqbs_improvement_phase,
    objective_value, AllocationMap, ScheduleInstance,
};

pub const CSV_HEADER: [&str; 10] = [
    "sweep_var",
    "sweep_value",
    "algo",
    "min_rb_mean",
    "min_rb_ci95",
    "q_minrb_mean",
    "q_all_mean",
    "q_all_ci95",
    "feasible_frac",
    "runs",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Objects,
    Cameras,
    /// Angle of view, degrees.
    Angle,
    /// Distance of view, meters.
    Distance,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Objects => "objects",
            SweepVariable::Cameras => "cameras",
            SweepVariable::Angle => "angle",
            SweepVariable::Distance => "distance",
        }
    }

    /// The sweep ranges of the evaluation.
    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweepVariable::Objects | SweepVariable::Cameras => {
                vec![30.0, 40.0, 50.0, 60.0, 70.0, 80.0]
            }
            SweepVariable::Angle => vec![90.0, 105.0, 120.0, 135.0, 150.0, 165.0, 180.0],
            SweepVariable::Distance => vec![80.0, 90.0, 100.0, 110.0, 120.0, 130.0, 140.0],
        }
    }

    pub fn apply(self, params: &mut InstanceParams, value: f64) -> Result<()> {
        let count = || {
            if value >= 1.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::InvalidParameter(format!(
                    "{} sweep needs positive integers, got {value}",
                    self.name()
                )))
            }
        };
        match self {
            SweepVariable::Objects => params.scenario.objects = count()?,
            SweepVariable::Cameras => params.scenario.cameras = count()?,
            SweepVariable::Angle => params.scenario.angle_of_view_deg = value,
            SweepVariable::Distance => params.scenario.distance_of_view = value,
        }
        Ok(())
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "objects" => Ok(SweepVariable::Objects),
            "cameras" => Ok(SweepVariable::Cameras),
            "angle" => Ok(SweepVariable::Angle),
            "distance" => Ok(SweepVariable::Distance),
            other => Err(Error::InvalidParameter(format!("unknown sweep variable {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    Mqbs,
    Baseline,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Mqbs => "mqbs",
            Algo::Baseline => "baseline",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub sweep_variable: SweepVariable,
    pub sweep_values: Vec<f64>,
    /// Parameters held fixed; the swept one is overwritten per point.
    #[serde(default)]
    pub fixed: InstanceParams,
    pub runs_per_point: usize,
    pub base_seed: u64,
    /// Run seeds tried per point before giving up, as a multiple of
    /// `runs_per_point`.
    #[serde(default = "default_draw_factor")]
    pub max_draw_factor: usize,
}

fn default_draw_factor() -> usize {
    20
}

impl ExperimentConfig {
    pub fn new(sweep_variable: SweepVariable) -> Self {
        Self {
            sweep_variable,
            sweep_values: sweep_variable.default_values(),
            fixed: InstanceParams::default(),
            runs_per_point: 500,
            base_seed: 0,
            max_draw_factor: default_draw_factor(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep_values.is_empty() {
            return Err(Error::InvalidParameter("sweep_values is empty".into()));
        }
        if self.sweep_values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter("sweep_values must be strictly increasing".into()));
        }
        if self.runs_per_point == 0 {
            return Err(Error::InvalidParameter("runs_per_point must be >= 1".into()));
        }
        if self.max_draw_factor == 0 {
            return Err(Error::InvalidParameter("max_draw_factor must be >= 1".into()));
        }
        Ok(())
    }

    /// Seed of run `run_index` at `sweep_value`. Both algorithms see the
    /// instance drawn from it.
    pub fn run_seed(&self, sweep_value: f64, run_index: u64) -> u64 {
        derive_seed(self.base_seed, &[sweep_value.to_bits(), run_index])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgoMetrics {
    /// RBs in use once the coverage step completes.
    pub min_rb: u32,
    /// Objective at that point.
    pub q_min_rb: f64,
    /// Objective after the full algorithm.
    pub q_all: f64,
}

impl AlgoMetrics {
    fn from_phases(coverage: &AllocationMap, full: &AllocationMap, inst: &ScheduleInstance) -> Self {
        Self {
            min_rb: coverage.total_used(),
            q_min_rb: objective_value(coverage, &inst.scenario),
            q_all: objective_value(full, &inst.scenario),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub mqbs: AlgoMetrics,
    pub baseline: AlgoMetrics,
}

impl PointRecord {
    pub fn get(&self, algo: Algo) -> &AlgoMetrics {
        match algo {
            Algo::Mqbs => &self.mqbs,
            Algo::Baseline => &self.baseline,
        }
    }

    /// Runs both algorithms on one instance.
    pub fn evaluate(inst: &ScheduleInstance) -> Result<Self> {
        let cov = mqbs_coverage_phase(inst)?;
        let full = mqbs_improvement_phase(cov.clone(), inst);
        let mqbs = AlgoMetrics::from_phases(&cov, &full, inst);
        let cov = baseline_coverage_phase(inst)?;
        let full = baseline_fill_phase(cov.clone(), inst);
        let baseline = AlgoMetrics::from_phases(&cov, &full, inst);
        Ok(Self { mqbs, baseline })
    }
}

/// One paired run. Fails when the seed yields no coverable scenario or
/// either algorithm cannot complete coverage within the spectrum.
pub fn run_point(config: &ExperimentConfig, sweep_value: f64, seed: u64) -> Result<PointRecord> {
    let mut params = config.fixed.clone();
    config.sweep_variable.apply(&mut params, sweep_value)?;
    let inst = build_instance(&params, seed)?;
    PointRecord::evaluate(&inst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub sweep_var: SweepVariable,
    pub sweep_value: f64,
    pub algo: Algo,
    pub min_rb_mean: f64,
    pub min_rb_ci95: f64,
    pub q_minrb_mean: f64,
    pub q_all_mean: f64,
    pub q_all_ci95: f64,
    pub feasible_frac: f64,
    pub runs: usize,
    /// Run indices `first_run..=last_run` were drawn for this point.
    pub first_run: u64,
    pub last_run: u64,
}

fn mean_ci95(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, 1.96 * (var / n).sqrt())
}

fn collect_point(config: &ExperimentConfig, value: f64) -> Result<(Vec<PointRecord>, u64)> {
    let want = config.runs_per_point;
    let limit = (want * config.max_draw_factor) as u64;
    let mut records = Vec::with_capacity(want);
    let mut next = 0u64;
    while records.len() < want {
        if next >= limit {
            return Err(Error::FeasibilityExhausted {
                attempts: limit as u32,
            });
        }
        let need = want - records.len();
        let batch = ((need + need / 4 + 8) as u64).min(limit - next);
        let results: Vec<Option<PointRecord>> = (next..next + batch)
            .into_par_iter()
            .map(|i| run_point(config, value, config.run_seed(value, i)).ok())
            .collect();
        for (offset, r) in results.into_iter().enumerate() {
            if let Some(r) = r {
                records.push(r);
                if records.len() == want {
                    return Ok((records, next + offset as u64 + 1));
                }
            }
        }
        next += batch;
    }
    Ok((records, next))
}

/// Aggregates `runs_per_point` feasible paired runs per sweep value into
/// one row per (value, algorithm). Infeasible seeds are skipped and
/// counted in `feasible_frac`.
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &value in &config.sweep_values {
        let (records, drawn) = collect_point(config, value)?;
        for algo in [Algo::Mqbs, Algo::Baseline] {
            let min_rb: Vec<f64> = records.iter().map(|r| r.get(algo).min_rb as f64).collect();
            let q_min: Vec<f64> = records.iter().map(|r| r.get(algo).q_min_rb).collect();
            let q_all: Vec<f64> = records.iter().map(|r| r.get(algo).q_all).collect();
            let (min_rb_mean, min_rb_ci95) = mean_ci95(&min_rb);
            let (q_all_mean, q_all_ci95) = mean_ci95(&q_all);
            rows.push(ResultRow {
                sweep_var: config.sweep_variable,
                sweep_value: value,
                algo,
                min_rb_mean,
                min_rb_ci95,
                q_minrb_mean: mean_ci95(&q_min).0,
                q_all_mean,
                q_all_ci95,
                feasible_frac: records.len() as f64 / drawn as f64,
                runs: records.len(),
                first_run: 0,
                last_run: drawn - 1,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.sweep_var.name().to_string(),
            r.sweep_value.to_string(),
            r.algo.name().to_string(),
            format!("{:.6}", r.min_rb_mean),
            format!("{:.6}", r.min_rb_ci95),
            format!("{:.6}", r.q_minrb_mean),
            format!("{:.6}", r.q_all_mean),
            format!("{:.6}", r.q_all_ci95),
            format!("{:.6}", r.feasible_frac),
            r.runs.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

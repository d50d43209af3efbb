use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use survsched::fixtures::table1_instance;
use survsched::harness::{
    build_instance, generate_events, read_events, run_sweep, run_timeline, write_csv, write_log,
    ExperimentConfig, InstanceParams, SweepVariable, TimelineConfig, TrafficConfig,
};
use survsched::oracle::{solve_exact, DEFAULT_NODE_BUDGET};
use survsched::sched::{objective_value, schedule_baseline, schedule_mqbs, validate_allocation};
use survsched::ScheduleInstance;

/// Uplink RB scheduling for video-surveillance cells.
#[derive(Parser)]
#[command(name = "survsched", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a random instance (or emit the built-in seven-camera example).
    Generate(GenerateArgs),
    /// Run a heuristic scheduler on an instance.
    Schedule(ScheduleArgs),
    /// Solve an instance exactly by branch and bound.
    Solve(SolveArgs),
    /// Run a parameter sweep comparing MQBS and the baseline.
    Sweep(SweepArgs),
    /// Generate a background-traffic event trace.
    Events(EventsArgs),
    /// Replay an event trace against an instance and log every transition.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Instance parameters as JSON; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    cameras: Option<usize>,
    #[arg(long)]
    objects: Option<usize>,
    /// Angle of view, degrees.
    #[arg(long)]
    angle: Option<f64>,
    /// Distance of view, meters.
    #[arg(long)]
    distance: Option<f64>,
    /// Emit the hand-built seven-camera example instead.
    #[arg(long, conflicts_with_all = ["config", "cameras", "objects", "angle", "distance"])]
    table1: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Mqbs,
    Baseline,
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "mqbs")]
    algo: AlgoArg,
    /// Print the RB grid instead of JSON.
    #[arg(long)]
    grid: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Search node limit.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Experiment configuration as JSON; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_var)]
    var: Option<SweepVariable>,
    /// Comma-separated sweep values.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for `<var>.csv` and `<var>.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EventsArgs {
    /// Instance whose spectrum shapes the demands.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 60_000)]
    horizon_ms: u64,
    /// Arrivals per second.
    #[arg(long)]
    rate: Option<f64>,
    /// Mean flow lifetime, seconds.
    #[arg(long)]
    lifetime: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long)]
    instance: PathBuf,
    /// JSON array or JSON lines of events.
    #[arg(long)]
    events: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    period_ms: u64,
    #[arg(long)]
    horizon_ms: Option<u64>,
    #[arg(long)]
    th_h: Option<u32>,
    #[arg(long)]
    th_l: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_var(s: &str) -> Result<SweepVariable, String> {
    s.parse().map_err(|e: survsched::Error| e.to_string())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut out = output(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_instance(path: &Path) -> Result<ScheduleInstance> {
    let inst: ScheduleInstance = read_json(path)?;
    inst.validate()?;
    Ok(inst)
}

fn generate(args: GenerateArgs) -> Result<()> {
    let inst = if args.table1 {
        table1_instance()
    } else {
        let mut params: InstanceParams = match &args.config {
            Some(p) => read_json(p)?,
            None => InstanceParams::default(),
        };
        let sp = &mut params.scenario;
        if let Some(v) = args.cameras {
            sp.cameras = v;
        }
        if let Some(v) = args.objects {
            sp.objects = v;
        }
        if let Some(v) = args.angle {
            sp.angle_of_view_deg = v;
        }
        if let Some(v) = args.distance {
            sp.distance_of_view = v;
        }
        build_instance(&params, args.seed)?
    };
    write_json(&inst, args.out.as_deref())
}

fn schedule(args: ScheduleArgs) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let (name, alloc) = match args.algo {
        AlgoArg::Mqbs => ("mqbs", schedule_mqbs(&inst)?),
        AlgoArg::Baseline => ("baseline", schedule_baseline(&inst)?),
    };
    if args.grid {
        let mut out = output(args.out.as_deref())?;
        out.write_all(alloc.render_grid().as_bytes())?;
        writeln!(out, "objective\t{}", objective_value(&alloc, &inst.scenario))?;
        out.flush()?;
        return Ok(());
    }
    let violations: Vec<String> = validate_allocation(&alloc, &inst)
        .iter()
        .map(ToString::to_string)
        .collect();
    let assignment: Vec<Option<usize>> =
        (0..inst.num_cameras()).map(|k| alloc.sub_band_of(k)).collect();
    let report = json!({
        "algo": name,
        "objective": objective_value(&alloc, &inst.scenario),
        "rbs_used": alloc.total_used(),
        "remaining": alloc.remaining,
        "assignment": assignment,
        "ranges": alloc.ranges,
        "violations": violations,
    });
    write_json(&report, args.out.as_deref())
}

fn solve(args: SolveArgs) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let sol = solve_exact(&inst, args.budget)?;
    write_json(&sol, args.out.as_deref())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut cfg = match (&args.config, args.var) {
        (Some(p), _) => read_json::<ExperimentConfig>(p)?,
        (None, Some(v)) => ExperimentConfig::new(v),
        (None, None) => bail!("either --config or --var is required"),
    };
    if let Some(v) = args.var {
        if v != cfg.sweep_variable {
            cfg.sweep_variable = v;
            cfg.sweep_values = v.default_values();
        }
    }
    if let Some(v) = args.values {
        cfg.sweep_values = v;
    }
    if let Some(r) = args.runs {
        cfg.runs_per_point = r;
    }
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    let rows = run_sweep(&cfg)?;
    fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let stem = cfg.sweep_variable.name();
    let csv_path = args.out.join(format!("{stem}.csv"));
    let mut w = output(Some(&csv_path))?;
    write_csv(&rows, &mut w)?;
    w.flush()?;
    write_json(
        &json!({ "config": cfg, "rows": rows }),
        Some(&args.out.join(format!("{stem}.json"))),
    )?;
    eprintln!("wrote {}", csv_path.display());
    Ok(())
}

fn events(args: EventsArgs) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let mut cfg = TrafficConfig {
        seed: args.seed,
        horizon_ms: args.horizon_ms,
        ..Default::default()
    };
    if let Some(r) = args.rate {
        cfg.arrival_rate_per_s = r;
    }
    if let Some(l) = args.lifetime {
        cfg.mean_lifetime_s = l;
    }
    let trace = generate_events(&cfg, &inst.spectrum)?;
    write_json(&trace, args.out.as_deref())
}

fn replay(args: ReplayArgs) -> Result<()> {
    let inst = load_instance(&args.instance)?;
    let file = File::open(&args.events)
        .with_context(|| format!("opening {}", args.events.display()))?;
    let trace = read_events(file)?;
    let cfg = TimelineConfig {
        period_ms: args.period_ms,
        horizon_ms: args.horizon_ms,
        th_h: args.th_h,
        th_l: args.th_l,
    };
    let (log, _) = run_timeline(inst, &trace, &cfg)?;
    let mut out = output(args.out.as_deref())?;
    write_log(&log, &mut out)?;
    out.flush()?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate(a) => generate(a),
        Command::Schedule(a) => schedule(a),
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Events(a) => events(a),
        Command::Replay(a) => replay(a),
    }
}

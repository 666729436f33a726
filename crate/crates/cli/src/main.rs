use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vistrack::bench::{self, BenchMode, BenchSettings, GridCell};
use vistrack::planner::PlannerConfig;
use vistrack::sim::{
    dynamic_obstacle_scenario, empty_space_scenario, write_metrics_csv, write_plan_log_csv, write_trajectories_jsonl,
    DynamicParams, EmptySpaceParams, MetricsRecord, RunResult, Scenario, Simulation,
};

mod overrides;

use overrides::apply_override;

#[derive(Parser)]
#[command(name = "vistrack", version, about = "Multi-agent target tracking simulator and benchmarks")]
struct Cli {
    /// -v prints keep-previous cycles, -vv every cycle.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario file and write metrics, plan log and trajectories.
    Run(RunArgs),
    /// Check a scenario file (and overrides) without running it.
    Validate(ScenarioArgs),
    /// Monte Carlo success rates over a grid of generated scenarios.
    Bench(BenchArgs),
    /// Write a generated benchmark scenario as TOML.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    scenario: PathBuf,
    /// Override a scenario field, e.g. `--set planner.sample_count=500`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Re-check every executed plan against its constraints at dense samples.
    #[arg(long)]
    audit: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Cells,
    Checks,
}

impl From<ModeArg> for BenchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Cells => BenchMode::Cells,
            ModeArg::Checks => BenchMode::Checks,
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict to these variants (e.g. `dynamic`, `proposed`).
    #[arg(long = "variant")]
    variants: Vec<String>,
    /// Restrict to these grid cells (e.g. `n5-short`, `n4-o20`).
    #[arg(long = "cell")]
    cells: Vec<String>,
    /// Sampled primitives per plan.
    #[arg(long, default_value_t = 300)]
    samples: usize,
    /// Seconds the target keeps moving (default 15 for cells, 20 for checks).
    #[arg(long)]
    duration: Option<f64>,
    /// 1000 trials, 1000 samples and the full 30 s / 40 s runs.
    #[arg(long)]
    full_scale: bool,
    /// Worker threads for trials (0: all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Directory for trials.csv and summary.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long, default_value_t = 3)]
    agents: usize,
    /// Sampling annulus for empty-space runs: short, medium or long.
    #[arg(long, default_value = "short")]
    annulus: String,
    #[arg(long, default_value_t = 10)]
    obstacles: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    duration: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Errors that map to exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a, cli.verbose),
        Command::Validate(a) => load(&a).map(|s| {
            println!("ok: {} ({} agents, {} static, {} dynamic obstacles)", name_of(&s, &a.scenario), s.agents.len(), s.static_obstacles.len(), s.dynamic_obstacles.len());
            ExitCode::SUCCESS
        }),
        Command::Bench(a) => run_bench(a),
        Command::Generate(a) => generate(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn name_of(s: &Scenario, path: &Path) -> String {
    if s.name.is_empty() {
        path.display().to_string()
    } else {
        s.name.clone()
    }
}

fn load(a: &ScenarioArgs) -> Result<Scenario, Failure> {
    let path = a.scenario.display();
    let text = fs::read_to_string(&a.scenario).map_err(|e| Failure(format!("{path}: {e}")))?;
    let scenario = if a.overrides.is_empty() {
        Scenario::from_toml_str(&text)
    } else {
        let mut table: toml::Table = toml::from_str(&text).map_err(|e| Failure(format!("{path}: {}", e.to_string().trim_end())))?;
        for o in &a.overrides {
            apply_override(&mut table, o).map_err(|e| Failure(format!("--set {o}: {e}")))?;
        }
        Scenario::from_toml_table(table)
    };
    scenario.map_err(|e| Failure(format!("{path}: {e}")))
}

fn run(a: RunArgs, verbose: u8) -> Result<ExitCode, Failure> {
    let scenario = load(&a.scenario)?;
    let name = name_of(&scenario, &a.scenario.scenario);
    let mut sim = Simulation::new(scenario)?;
    if a.audit {
        sim = sim.with_audit();
    }
    let result = sim.run();
    if verbose > 0 {
        for r in result.plan_log.iter().filter(|r| verbose > 1 || r.status == "keep") {
            eprintln!("{:>5} {:>7.2} a{} {} {} passed={} {}", r.cycle, r.time, r.agent, r.status, r.reason, r.passed, r.histogram);
        }
    }
    write_outputs(&a.out, &result).map_err(|e| Failure(format!("{}: {e}", a.out.display())))?;
    print_summary(&name, &result);
    if let Some(audit) = &result.audit {
        println!("audit: {} plans, {} violations", audit.plans, audit.violations.len());
    }
    Ok(if result.success.success { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn write_outputs(dir: &Path, r: &RunResult) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let open = |name: &str| File::create(dir.join(name)).map(BufWriter::new);
    let mut w = open("metrics.csv")?;
    write_metrics_csv(&mut w, &r.metrics)?;
    w.flush()?;
    let mut w = open("plan_log.csv")?;
    write_plan_log_csv(&mut w, &r.plan_log)?;
    w.flush()?;
    let mut w = open("trajectories.jsonl")?;
    write_trajectories_jsonl(&mut w, &r.trajectories)?;
    w.flush()
}

fn fmt_metric(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3}")
    } else {
        "-".into()
    }
}

fn print_summary(name: &str, r: &RunResult) {
    println!("{name}: minimum/mean distance [m]");
    for (k, metric) in MetricsRecord::NAMES.iter().enumerate() {
        println!("  {metric:<5} {:>7}/{:<7}", fmt_metric(r.summary.min[k]), fmt_metric(r.summary.mean[k]));
    }
    let keeps = r.keep_previous_count();
    println!("  plans {} (kept previous {keeps})", r.plan_log.len());
    if r.success.success {
        println!("result: success");
    } else {
        let what: Vec<String> = r.success.failures.iter().map(|(k, t)| format!("{} at {t:.2}s", k.name())).collect();
        println!("result: failure ({})", what.join(", "));
    }
}

fn run_bench(a: BenchArgs) -> Result<ExitCode, Failure> {
    let mode = BenchMode::from(a.mode);
    let all_variants = mode.variants();
    let variants: Vec<_> = if a.variants.is_empty() {
        all_variants.to_vec()
    } else {
        a.variants
            .iter()
            .map(|n| mode.variant(n).ok_or_else(|| Failure(format!("unknown variant {n:?}; expected one of {}", all_variants.map(|v| v.name).join(", ")))))
            .collect::<Result<_, _>>()?
    };
    let grid = mode.grid();
    let cells: Vec<GridCell> = if a.cells.is_empty() {
        grid
    } else {
        a.cells
            .iter()
            .map(|c| grid.iter().copied().find(|g| g.to_string() == *c).ok_or_else(|| Failure(format!("unknown grid cell {c:?}"))))
            .collect::<Result<_, _>>()?
    };
    let (trials, samples, duration) = if a.full_scale {
        (1000, 1000, a.duration)
    } else {
        let desk = match mode {
            BenchMode::Cells => 15.0,
            BenchMode::Checks => 20.0,
        };
        (a.trials, a.samples, Some(a.duration.unwrap_or(desk)))
    };
    let settings = BenchSettings {
        trials,
        seed: a.seed,
        planner: PlannerConfig { sample_count: samples, ..Default::default() },
        duration,
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.threads).build()?;
    let report = pool.install(|| bench::run_bench(&cells, &variants, &settings))?;
    if let Some(dir) = &a.out {
        let write = || -> io::Result<()> {
            fs::create_dir_all(dir)?;
            let mut w = BufWriter::new(File::create(dir.join("trials.csv"))?);
            bench::write_trials_csv(&mut w, &report.trials)?;
            w.flush()?;
            let mut w = BufWriter::new(File::create(dir.join("summary.csv"))?);
            bench::write_summary_csv(&mut w, &report.summary)?;
            w.flush()
        };
        write().map_err(|e| Failure(format!("{}: {e}", dir.display())))?;
    }
    println!("{:<10} {:<15} {:>9} {:>7}  95% interval", "cell", "variant", "successes", "rate");
    for s in &report.summary {
        println!(
            "{:<10} {:<15} {:>4}/{:<4} {:>6.1}%  [{:.1}, {:.1}]",
            s.cell.to_string(),
            s.variant,
            s.successes,
            s.trials,
            100.0 * s.rate,
            100.0 * s.ci_low,
            100.0 * s.ci_high
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn generate(a: GenerateArgs) -> Result<ExitCode, Failure> {
    let scenario = match a.mode {
        ModeArg::Cells => {
            let annulus = bench::Annulus::ALL
                .into_iter()
                .find(|x| x.name() == a.annulus)
                .ok_or_else(|| Failure(format!("unknown annulus {:?}; expected short, medium or long", a.annulus)))?;
            let mut p = EmptySpaceParams { agents: a.agents, annulus: annulus.range(), ..Default::default() };
            if let Some(d) = a.duration {
                p.duration = d;
            }
            empty_space_scenario(&p, a.seed)?
        }
        ModeArg::Checks => {
            let mut p = DynamicParams { agents: a.agents, obstacles: a.obstacles, ..Default::default() };
            if let Some(d) = a.duration {
                p.duration = d;
            }
            dynamic_obstacle_scenario(&p, a.seed)?
        }
    };
    let text = scenario.to_toml_string();
    match &a.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

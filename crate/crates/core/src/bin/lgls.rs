use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use lgls::bench::runner::{run_prepared, Fault, Prepared, RunOptions};
use lgls::bench::svg::render_episode;
use lgls::bench::{EventKind, ScenarioSpec};
use lgls::planner::Instrumentation;
use lgls::verify::{verify, VerifyConfig};
use lgls::Error;

#[derive(Parser)]
#[command(name = "lgls", version, about = "Lifelong lazy replanning benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write report.csv
    Run(RunArgs),
    /// Randomized optimality checks against Dijkstra
    Verify(VerifyArgs),
    /// Write per-episode SVGs without the CSV
    Render(RunArgs),
}

#[derive(Args)]
struct Overrides {
    /// Heuristic weight inflation for every planner
    #[arg(long)]
    inflation: Option<f64>,
    /// Truncation factor for every planner
    #[arg(long)]
    truncation: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    scenario: PathBuf,
    #[arg(long, env = "LGLS_OUTPUT_DIR", default_value = "lgls-out")]
    out: PathBuf,
    /// Comma-separated planner names or algorithms to keep
    #[arg(long, value_delimiter = ',')]
    planners: Vec<String>,
    /// Also write one SVG per planner and episode
    #[arg(long)]
    svg: bool,
    #[command(flatten)]
    factors: Overrides,
    /// Expansion event for the lazy planners
    #[arg(long, value_enum)]
    event: Option<EventArg>,
    /// Depth for the constant_depth event
    #[arg(long)]
    alpha: Option<u32>,
    /// Collision-check spacing
    #[arg(long)]
    delta: Option<f64>,
    /// Check search invariants after every operation
    #[arg(long)]
    instrument: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Seed of the first trial; trial i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    factors: Overrides,
    /// Feed the planners an oracle that ignores obstacles
    #[arg(long)]
    inject_fault: bool,
    /// Check search invariants after every operation
    #[arg(long)]
    instrument: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum EventArg {
    ShortestPath,
    ConstantDepth,
}

// Exit statuses.
const IO_OR_SCHEMA: u8 = 1;
const CORRECTNESS: u8 = 2;

fn is_correctness(e: &Error) -> bool {
    match e {
        Error::Invariant(_) | Error::BrokenBackpointers(_) => true,
        Error::Episode { source, .. } => is_correctness(source),
        _ => false,
    }
}

fn fail(e: anyhow::Error) -> ExitCode {
    eprintln!("error: {e:#}");
    let code = match e.downcast_ref::<Error>() {
        Some(inner) if is_correctness(inner) => CORRECTNESS,
        _ => IO_OR_SCHEMA,
    };
    ExitCode::from(code)
}

fn load(args: &RunArgs) -> anyhow::Result<ScenarioSpec> {
    let mut spec = ScenarioSpec::load(&args.scenario)
        .with_context(|| format!("reading {}", args.scenario.display()))?;
    if !args.planners.is_empty() {
        for name in &args.planners {
            if !spec
                .planners
                .iter()
                .any(|p| &p.label() == name || &p.algorithm.to_string() == name)
            {
                bail!("no planner named {name} in {}", args.scenario.display());
            }
        }
        spec.planners.retain(|p| {
            args.planners
                .iter()
                .any(|n| *n == p.label() || *n == p.algorithm.to_string())
        });
    }
    for p in &mut spec.planners {
        if let Some(x) = args.factors.inflation {
            p.inflation = x;
        }
        if let Some(x) = args.factors.truncation {
            p.truncation = x;
        }
        if let Some(e) = args.event {
            p.event = match e {
                EventArg::ShortestPath => EventKind::ShortestPath,
                EventArg::ConstantDepth => EventKind::ConstantDepth,
            };
        }
        if let Some(a) = args.alpha {
            p.alpha = a;
        }
    }
    if let Some(d) = args.delta {
        spec.collision_step = d;
    }
    spec.validate()?;
    Ok(spec)
}

/// Writes through a sibling temp file so readers never see partial output.
fn write_atomic(path: &Path, data: &[u8]) -> anyhow::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, data).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn cmd_run(args: &RunArgs, csv: bool) -> anyhow::Result<ExitCode> {
    let spec = load(args)?;
    let prepared = Prepared::new(&spec)?;
    let options = RunOptions {
        instrumentation: if args.instrument {
            Instrumentation::all()
        } else {
            Instrumentation::default()
        },
        keep_renders: args.svg || !csv,
        fault: None,
    };
    let report = run_prepared(&prepared, &spec, &options)?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;

    if csv {
        let mut buf = Vec::new();
        report.write_csv(&mut buf)?;
        let path = args.out.join("report.csv");
        write_atomic(&path, &buf)?;
        println!(
            "{:<16} {:>3} {:>7} {:>7} {:>9} {:>6}",
            "planner", "ep", "evals", "expand", "cost", "solved"
        );
        for r in &report.rows {
            println!(
                "{:<16} {:>3} {:>7} {:>7} {:>9.4} {:>6}",
                r.planner, r.episode, r.edge_evals, r.vertex_expansions, r.path_cost, r.solved
            );
        }
        println!("wrote {}", path.display());
    }
    for ep in &report.renders {
        let world = &prepared.worlds[ep.episode];
        let svg = render_episode(&prepared.roadmap, world.as_ref(), ep);
        let path = args
            .out
            .join(format!("{}-ep{}.svg", ep.planner, ep.episode));
        write_atomic(&path, svg.as_bytes())?;
    }
    if !report.renders.is_empty() {
        println!(
            "wrote {} svg files to {}",
            report.renders.len(),
            args.out.display()
        );
    }

    let violations = report.violations(&spec);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("violation: {v}");
        }
        return Ok(ExitCode::from(CORRECTNESS));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<ExitCode> {
    let cfg = VerifyConfig {
        trials: args.trials,
        seed: args.seed,
        inflation: args.factors.inflation.unwrap_or(1.0),
        truncation: args.factors.truncation.unwrap_or(1.0),
        fault: args.inject_fault.then_some(Fault::IgnoreObstacles),
        instrumentation: if args.instrument {
            Instrumentation::all()
        } else {
            Instrumentation::default()
        },
        ..Default::default()
    };
    for p in cfg.planner_set() {
        p.config().validate()?;
    }
    let report = verify(&cfg)?;
    for f in &report.failures {
        eprintln!("FAIL seed {}: {}", f.seed, f.message);
    }
    println!("{}", report.summary());
    Ok(if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(CORRECTNESS)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Run(a) => cmd_run(a, true),
        Command::Render(a) => cmd_run(a, false),
        Command::Verify(a) => cmd_verify(a),
    };
    res.unwrap_or_else(fail)
}

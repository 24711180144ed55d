//! The `cordon` command-line tool.
//!
//! Subcommands cover the whole workflow: `generate` random environments,
//! `solve` them with either placement strategy, `verify` a placement by
//! exhaustive search, `sweep` a whole experiment from a config file, and
//! `render` results for inspection.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad usage or malformed input,
//! 3 infeasible instance, 4 failed verification.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cordon::clock::WallClock;
use cordon::csvout::{summary_csv, trials_csv};
use cordon::expcfg::{parse_config, parse_target_count};
use cordon::mapfmt::{parse_map, parse_placement, write_map, write_placement};
use cordon::parallel::run_experiment_parallel;
use cordon::render::{render_ascii, render_svg};
use cordon::CliError;

use cordon_core::experiments::{
    summarize, trend_checks, ExperimentConfig, ExperimentError, ExperimentRun, Scenario,
    SweepSummary, TrendReport,
};
use cordon_core::grid::{self, EnvironmentKind, GenSpec, GridError, OccupancyGrid, TargetCount};
use cordon_core::oracle::find_breach;
use cordon_core::planner::{solve_holistic, solve_individual, Placement};

/// Environment variable overriding every seed (generate and sweep alike).
const SEED_ENV: &str = "CORDON_SEED";

#[derive(Parser)]
#[command(
    name = "cordon",
    version,
    about = "Seal off target regions of an occupancy grid with as few monitors as possible",
    after_help = "Set CORDON_SEED to override the seed of `generate` and `sweep`."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Open,
    Closed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ApproachArg {
    Individual,
    Holistic,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random environment and write it as a map file.
    Generate {
        /// Environment family.
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        width: usize,
        #[arg(long)]
        height: usize,
        /// Open: rectangles stamped. Closed: intersections blocked.
        #[arg(long)]
        obstacles: usize,
        /// Fixed count `N` or uniform range `MIN-MAX`.
        #[arg(long, value_parser = parse_target_count)]
        targets: TargetCount,
        /// City-block side length (closed environments).
        #[arg(long, default_value_t = grid::DEFAULT_BLOCK_SIZE)]
        block_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output map file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Solve a map with one or both placement strategies.
    Solve {
        map: PathBuf,
        #[arg(long, value_enum, default_value_t = ApproachArg::Both)]
        approach: ApproachArg,
        /// Write `<PREFIX>.<approach>.placement` for each solved strategy.
        #[arg(short, long, value_name = "PREFIX")]
        out: Option<String>,
    },
    /// Check a placement against a map by exhaustive breach search.
    Verify { map: PathBuf, placement: PathBuf },
    /// Run an experiment from a config file and write CSV results.
    Sweep {
        config: PathBuf,
        /// Directory for the result files.
        #[arg(short, long, default_value = ".")]
        out_dir: PathBuf,
        /// Worker threads; results are identical at any count.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Render a map or placement file as SVG (default) or ASCII art.
    Render {
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        ascii: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { kind, width, height, obstacles, targets, block_size, seed, out } => {
            cmd_generate(kind, width, height, obstacles, targets, block_size, seed, out)
        }
        Command::Solve { map, approach, out } => cmd_solve(&map, approach, out.as_deref()),
        Command::Verify { map, placement } => cmd_verify(&map, &placement),
        Command::Sweep { config, out_dir, jobs } => cmd_sweep(&config, &out_dir, jobs),
        Command::Render { input, out, ascii } => cmd_render(&input, out.as_deref(), ascii),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    kind: KindArg,
    width: usize,
    height: usize,
    obstacles: usize,
    targets: TargetCount,
    block_size: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let seed = seed_override()?.unwrap_or(seed);
    let spec = GenSpec {
        kind: match kind {
            KindArg::Open => EnvironmentKind::Open,
            KindArg::Closed => EnvironmentKind::Closed,
        },
        width,
        height,
        obstacle_count: obstacles,
        target_count: targets,
        block_size,
        seed,
    };
    spec.validate().map_err(|e| CliError::Contract(e.to_string()))?;
    if spec.is_saturated() {
        eprintln!("note: more blocked intersections requested than exist; blocking all of them");
    }
    let grid = grid::generate(&spec).map_err(|e| match e {
        GridError::PlacementExhausted { .. } => CliError::Infeasible(e.to_string()),
        other => CliError::Contract(other.to_string()),
    })?;
    let text = write_map(&grid);
    match out {
        Some(path) => {
            write_file(&path, &text)?;
            println!(
                "wrote {} ({}x{}, {} targets, {} obstacle cells, seed {seed})",
                path.display(),
                grid.width(),
                grid.height(),
                grid.target_count(),
                grid.obstacle_count(),
            );
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_solve(map: &Path, approach: ApproachArg, out: Option<&str>) -> Result<(), CliError> {
    let grid = read_map(map)?;
    if grid.target_count() == 0 {
        return Err(CliError::Contract(format!(
            "{}: map has no targets to seal",
            map.display()
        )));
    }
    println!(
        "map {}: {}x{}, {} targets",
        map.display(),
        grid.width(),
        grid.height(),
        grid.target_count()
    );
    let clock = WallClock::new();
    let mut solved: Vec<Placement> = Vec::new();
    if approach != ApproachArg::Holistic {
        solved.push(solve_individual(&grid, &clock));
    }
    if approach != ApproachArg::Individual {
        solved.push(solve_holistic(&grid, &clock));
    }

    let mut all_feasible = true;
    for placement in &solved {
        println!(
            "{}={} feasible={} time={:.1?}",
            placement.approach,
            placement.robot_count(),
            placement.feasible,
            placement.solve_time,
        );
        if !placement.feasible && !placement.per_target_feasible.is_empty() {
            let unsealed: Vec<String> = placement
                .per_target_feasible
                .iter()
                .enumerate()
                .filter(|(_, ok)| !**ok)
                .map(|(id, _)| id.to_string())
                .collect();
            println!("unsealable targets: {}", unsealed.join(" "));
        }
        all_feasible &= placement.feasible;
        if let Some(prefix) = out {
            let path = PathBuf::from(format!("{prefix}.{}.placement", placement.approach));
            write_file(&path, &write_placement(&grid, &placement.robots))?;
            println!("wrote {}", path.display());
        }
    }
    if let [individual, holistic] = &solved[..] {
        match (individual.feasible, holistic.feasible) {
            (true, true) => println!(
                "savings={}",
                individual.robot_count() as i64 - holistic.robot_count() as i64
            ),
            _ => println!("savings=none"),
        }
    }
    if all_feasible {
        Ok(())
    } else {
        Err(CliError::Infeasible("at least one target cannot be sealed".to_string()))
    }
}

fn cmd_verify(map: &Path, placement: &Path) -> Result<(), CliError> {
    let grid = read_map(map)?;
    let text = read_file(placement)?;
    let (placed_grid, robots) = parse_placement(&text)
        .map_err(|e| CliError::Contract(format!("{}: {e}", placement.display())))?;
    if placed_grid != grid {
        return Err(CliError::Contract(format!(
            "{} embeds a different map than {}",
            placement.display(),
            map.display()
        )));
    }
    if let Some(r) = robots.iter().find(|r| grid.is_border(**r)) {
        return Err(CliError::Contract(format!(
            "monitor {r} sits on the border ring; cordons use interior cells"
        )));
    }
    match find_breach(&grid, &robots) {
        None => {
            println!("SEPARATED: {} monitors block every border-to-target walk", robots.len());
            Ok(())
        }
        Some(walk) => {
            let steps: Vec<String> =
                walk.iter().map(|c| format!("({},{})", c.row, c.col)).collect();
            println!("LEAK: {}", steps.join(" -> "));
            Err(CliError::Verify("a border-to-target walk evades the monitors".to_string()))
        }
    }
}

fn cmd_sweep(config_path: &Path, out_dir: &Path, jobs: usize) -> Result<(), CliError> {
    let text = read_file(config_path)?;
    let mut config = parse_config(&text)
        .map_err(|e| CliError::Contract(format!("{}: {e}", config_path.display())))?;
    if let Some(seed) = seed_override()? {
        config.master_seed = seed;
    }

    let clock = WallClock::new();
    let run = run_experiment_parallel(&config, &clock, jobs).map_err(|e| match e {
        ExperimentError::GenerationExhausted { .. } => CliError::Infeasible(e.to_string()),
        other => CliError::Contract(other.to_string()),
    })?;
    let summary = summarize(&run.records);
    let trends = trend_checks(&config, &summary);

    let unverified = run.records.iter().filter(|r| !r.oracle_verified).count();
    if unverified > 0 {
        return Err(CliError::Verify(format!(
            "{unverified} trials failed oracle verification"
        )));
    }

    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::io(&format!("creating {}", out_dir.display()), e))?;
    let stem = if config.id == 0 { "custom".to_string() } else { format!("exp{}", config.id) };
    let trials_path = out_dir.join(format!("{stem}_trials.csv"));
    let summary_path = out_dir.join(format!("{stem}_summary.csv"));
    let trends_path = out_dir.join(format!("{stem}_trends.txt"));
    write_file(&trials_path, &trials_csv(&run.records))?;
    write_file(&summary_path, &summary_csv(&summary))?;
    let report = render_report(&config, &run, &summary, &trends);
    write_file(&trends_path, &report)?;

    print!("{report}");
    for path in [&trials_path, &summary_path, &trends_path] {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_render(input: &Path, out: Option<&Path>, ascii: bool) -> Result<(), CliError> {
    let text = read_file(input)?;
    // Placement parsing accepts plain maps too (zero monitors).
    let (grid, robots) = parse_placement(&text)
        .map_err(|e| CliError::Contract(format!("{}: {e}", input.display())))?;
    let rendered = if ascii { render_ascii(&grid, &robots) } else { render_svg(&grid, &robots) };
    match out {
        Some(path) => {
            write_file(path, &rendered)?;
            println!("wrote {}", path.display());
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

/// One human-readable block describing a finished run; written to the trends
/// file and echoed to stdout.
fn render_report(
    config: &ExperimentConfig,
    run: &ExperimentRun,
    summary: &SweepSummary,
    trends: &TrendReport,
) -> String {
    let mut out = format!(
        "{}\nrecords={} discards={} points={}\n",
        describe(config),
        run.records.len(),
        run.discards.len(),
        summary.points.len(),
    );
    out.push_str(&format!("interior_peak: {}\n", trends.interior_peak));
    out.push_str(&format!("small_env_advantage: {}\n", trends.small_env_advantage));
    out.push_str(&format!("target_scaling: {}\n", trends.target_scaling));
    match trends.timing_ratio_rho {
        Some(rho) => out.push_str(&format!(
            "timing_ratio_decreases: {} rho={rho:.4}\n",
            trends.timing_ratio_decreases
        )),
        None => out.push_str(&format!(
            "timing_ratio_decreases: {}\n",
            trends.timing_ratio_decreases
        )),
    }
    out
}

fn describe(config: &ExperimentConfig) -> String {
    let name = if config.id == 0 { "custom".to_string() } else { config.id.to_string() };
    match &config.scenario {
        Scenario::Pathologic => format!(
            "experiment {name}: showcase map, trials={}, seed={}",
            config.trials_per_point, config.master_seed
        ),
        Scenario::Sweep(sw) => {
            let kind = match sw.kind {
                EnvironmentKind::Open => "open",
                EnvironmentKind::Closed => "closed",
            };
            format!(
                "experiment {name}: {kind} environments, sweep {} {}..={} step {}, \
                 {}x{}, trials/point={}, seed={}",
                sw.variable,
                sw.from,
                sw.to,
                sw.step,
                sw.width,
                sw.height,
                config.trials_per_point,
                config.master_seed,
            )
        }
    }
}

fn seed_override() -> Result<Option<u64>, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| CliError::Contract(format!("{SEED_ENV} must be a u64, got {raw:?}"))),
        Err(_) => Ok(None),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(&path.display().to_string(), e))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(&path.display().to_string(), e))
}

fn read_map(path: &Path) -> Result<OccupancyGrid, CliError> {
    let text = read_file(path)?;
    parse_map(&text).map_err(|e| CliError::Contract(format!("{}: {e}", path.display())))
}

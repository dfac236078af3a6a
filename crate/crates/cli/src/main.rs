use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use orbitkeep::gravity::checks::{run_checks, CheckOutcome};
use orbitkeep::gravity::GravityError;
use orbitkeep::scenario::presets::SWEEP_PRESET;
use orbitkeep::scenario::{
    resolve_scenario, run_monte_carlo, run_sweep, write_samples_csv, Scenario, ScenarioError, SweepAxis, PRESET_NAMES,
};
use orbitkeep::shape::{parse_shape, synthetic, PolyhedronShape, ShapeError, ShapeFormat};
use orbitkeep::sim::{write_csv, RunSummary};
use serde::Serialize;
use thiserror::Error;

const DEFAULT_OUT: &str = "orbitkeep-out";

#[derive(Parser)]
#[command(
    name = "orbitkeep",
    version,
    about = "Path-following orbit keeping around small bodies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one closed-loop simulation; writes telemetry.csv and summary.json.
    Simulate(SimulateArgs),
    /// Dispersed initial states; writes samples.csv and montecarlo.json.
    Montecarlo(MonteCarloArgs),
    /// One run per parameter value; writes sweep.json and sweep_r_error.csv.
    Sweep(SweepArgs),
    /// Gravity self-consistency checks on a shape model.
    GravityCheck(GravityCheckArgs),
    /// Print the built-in scenario names.
    ListPresets,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file (TOML) or preset name.
    #[arg(long)]
    scenario: String,
    /// Override one field, e.g. `sim.duration=3day` or `controller.n_phi=10`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory (defaults to the scenario's output.dir, then ./orbitkeep-out).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: ScenarioArgs,
    /// Noise seed, replacing the scenario's.
    #[arg(long)]
    seed: Option<u64>,
    /// Exit with status 4 when the run ends in impact or escape.
    #[arg(long)]
    fail_on_event: bool,
}

#[derive(Args)]
struct MonteCarloArgs {
    #[command(flatten)]
    common: ScenarioArgs,
    /// Number of samples, replacing the scenario's.
    #[arg(long)]
    samples: Option<usize>,
    /// Sample i uses seed base + i.
    #[arg(long)]
    base_seed: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Base scenario; the default enters a 500 m Itokawa orbit from 600 m.
    #[arg(long, default_value = SWEEP_PRESET)]
    scenario: String,
    /// Override one field of the base scenario.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Output directory (defaults to the scenario's output.dir, then ./orbitkeep-out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// D, lambda, n_phi or control_period.
    #[arg(long)]
    axis: SweepAxis,
    /// Comma-separated values in SI units.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    values: Vec<f64>,
}

#[derive(Args)]
struct GravityCheckArgs {
    /// Shape file (.obj, .tab/.txt vertex-face list) or `builtin:NAME`.
    #[arg(long)]
    shape: String,
    /// Multiplier from file units to metres.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Print the outcomes as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Gravity(#[from] GravityError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("run ended early: {0}")]
    TerminalEvent(String),
    #[error("{0} gravity check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Scenario(e) if e.is_validation() => 3,
            CliError::Shape(_) => 3,
            _ => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(args) => simulate(args),
        Command::Montecarlo(args) => monte_carlo(args),
        Command::Sweep(args) => sweep(args),
        Command::GravityCheck(args) => gravity_check(args),
        Command::ListPresets => {
            for name in PRESET_NAMES {
                println!("{name}");
            }
            Ok(())
        }
    }
}

fn output_dir(explicit: Option<PathBuf>, scenario: &Scenario) -> Result<PathBuf, CliError> {
    let dir = explicit
        .or_else(|| scenario.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    fs::create_dir_all(&dir).map_err(|source| CliError::Output {
        path: dir.clone(),
        source,
    })?;
    Ok(dir)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Output {
            path: path.to_path_buf(),
            source,
        })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")
        .and_then(|()| w.flush())
        .map_err(|source| CliError::Output {
            path: path.to_path_buf(),
            source,
        })
}

#[derive(Serialize)]
struct SummaryFile<'a> {
    scenario: &'a str,
    seed: u64,
    #[serde(flatten)]
    summary: &'a RunSummary,
}

fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let scenario = resolve_scenario(&args.common.scenario, &args.common.overrides)?;
    let mut built = scenario.build()?;
    if let Some(seed) = args.seed {
        built.noise.seed = seed;
    }
    let out = built.run().map_err(ScenarioError::from)?;
    let dir = output_dir(args.common.out, &scenario)?;

    write_csv(&out.records, create(&dir.join("telemetry.csv"))?)?;
    let summary = &out.summary;
    write_json(
        &dir.join("summary.json"),
        &SummaryFile {
            scenario: &scenario.name,
            seed: built.noise.seed,
            summary,
        },
    )?;

    println!(
        "{}: total ΔV {:.4} m/s, {:?} at t = {:.0} s, output in {}",
        scenario.name,
        summary.total_dv,
        summary.terminal,
        summary.terminal.time(),
        dir.display()
    );
    for w in &summary.warnings {
        eprintln!("warning: {w}");
    }
    if args.fail_on_event && !summary.terminal.is_completed() {
        return Err(CliError::TerminalEvent(format!("{:?}", summary.terminal)));
    }
    Ok(())
}

#[derive(Serialize)]
struct MonteCarloFile<'a> {
    scenario: &'a str,
    samples: usize,
    base_seed: u64,
    success_rate: f64,
    mean_dv: f64,
    std_dv: f64,
    three_sigma_dv: f64,
    errors: &'a [(usize, String)],
}

fn monte_carlo(args: MonteCarloArgs) -> Result<(), CliError> {
    let scenario = resolve_scenario(&args.common.scenario, &args.common.overrides)?;
    let mut spec = scenario.montecarlo.clone().ok_or_else(|| {
        ScenarioError::Validation("scenario has no [montecarlo] section (add one or use --override)".into())
    })?;
    if let Some(n) = args.samples {
        spec.samples = n;
    }
    if let Some(seed) = args.base_seed {
        spec.base_seed = seed;
    }
    let built = scenario.build()?;
    let report = run_monte_carlo(&built, &spec)?;
    let dir = output_dir(args.common.out, &scenario)?;

    write_samples_csv(&report.samples, create(&dir.join("samples.csv"))?)?;
    write_json(
        &dir.join("montecarlo.json"),
        &MonteCarloFile {
            scenario: &scenario.name,
            samples: spec.samples,
            base_seed: spec.base_seed,
            success_rate: report.success_rate,
            mean_dv: report.mean_dv,
            std_dv: report.std_dv,
            three_sigma_dv: report.three_sigma_dv,
            errors: &report.errors,
        },
    )?;
    println!(
        "{}: {} samples, mean ΔV {:.4} m/s, 3σ {:.4} m/s, success {:.1}%, output in {}",
        scenario.name,
        spec.samples,
        report.mean_dv,
        report.three_sigma_dv,
        100.0 * report.success_rate,
        dir.display()
    );
    for (i, e) in &report.errors {
        eprintln!("sample {i} failed: {e}");
    }
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let scenario = resolve_scenario(&args.scenario, &args.overrides)?;
    let built = scenario.build()?;
    let points = run_sweep(&built, args.axis, &args.values)?;
    let dir = output_dir(args.out, &scenario)?;

    write_json(&dir.join("sweep.json"), &points)?;
    let mut w = csv::Writer::from_writer(create(&dir.join("sweep_r_error.csv"))?);
    w.write_record(["value", "t", "r_error"])?;
    for p in &points {
        for (t, e) in &p.r_error {
            w.write_record([p.value.to_string(), t.to_string(), e.to_string()])?;
        }
    }
    w.flush().map_err(|source| CliError::Output {
        path: dir.join("sweep_r_error.csv"),
        source,
    })?;

    for p in &points {
        let conv = p
            .convergence_time
            .map_or_else(|| "never".to_string(), |t| format!("{:.2} h", t / 3600.0));
        println!(
            "{:?} = {}: ΔV {:.4} m/s, r error < 1 m from {}, final-day RMS {:.4} m",
            args.axis, p.value, p.summary.total_dv, conv, p.final_day_rms
        );
    }
    Ok(())
}

fn load_shape(reference: &str, scale: f64) -> Result<PolyhedronShape, CliError> {
    let shape = match reference.strip_prefix("builtin:") {
        Some(name) => synthetic::builtin(name)?.scaled(scale),
        None => {
            let path = Path::new(reference);
            let bytes = fs::read(path).map_err(|source| ScenarioError::Io {
                path: path.to_path_buf(),
                source,
            })?;
            parse_shape(&bytes, ShapeFormat::from_path(path), scale)?
        }
    };
    Ok(shape)
}

fn gravity_check(args: GravityCheckArgs) -> Result<(), CliError> {
    let shape = load_shape(&args.shape, args.scale)?;
    let outcomes: Vec<CheckOutcome> = run_checks(&shape)?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&outcomes)?);
    } else {
        for c in &outcomes {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            println!("{mark} {:<58} {:.3e} (tol {:.0e})", c.name, c.worst, c.tolerance);
        }
    }
    match outcomes.iter().filter(|c| !c.passed).count() {
        0 => Ok(()),
        n => Err(CliError::ChecksFailed(n)),
    }
}

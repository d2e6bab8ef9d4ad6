use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;
mod settings;

use settings::{MethodArg, ModeArg};

#[derive(Debug, Parser)]
#[command(name = "skyport", version, about = "Air-taxi skyport location: ingest, solve, sweep, analyze, export")]
pub struct Cli {
    /// TOML file with default values for any flag (flags win).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Zero out wall-clock fields so reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_meta: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an instance from trip records and a zones table.
    Ingest(IngestArgs),
    /// Solve one scenario and print a table row.
    Solve(SolveArgs),
    /// Solve a grid of p values and (alpha, beta) scenarios.
    Sweep(SweepArgs),
    /// Hub arrival profiles, tolerable arrival rate and market penetration.
    Analyze(AnalyzeArgs),
    /// Write the integer program (MPS) or a solution map (GeoJSON).
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub trips: PathBuf,
    #[arg(long)]
    pub zones: PathBuf,
    #[arg(long, default_value = "instance.json")]
    pub out: PathBuf,
    #[arg(long, default_value = "ingest_stats.json")]
    pub stats: PathBuf,
    /// Keep the N origin zones with the most airport trips.
    #[arg(long, conflicts_with = "keep_quantile")]
    pub keep_zones: Option<usize>,
    /// Keep this fraction of origin zones, highest demand first.
    #[arg(long)]
    pub keep_quantile: Option<f64>,
    /// Air-taxi speed, miles per hour.
    #[arg(long)]
    pub airspeed: Option<f64>,
    #[arg(long)]
    pub min_trip_minutes: Option<f64>,
    #[arg(long)]
    pub max_trip_minutes: Option<f64>,
}

#[derive(Debug, Args, Clone)]
pub struct ScenarioArgs {
    /// Transfer time, minutes.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Ground congestion factor (>= 1).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Number of hubs.
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, Args, Clone)]
pub struct SolverArgs {
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Relative optimality gap accepted by branch-and-bound.
    #[arg(long)]
    pub gap: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value = "solution.json")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, default_value = "sweep")]
    pub out_dir: PathBuf,
    /// Comma-separated hub counts (default 0..=10).
    #[arg(long, value_delimiter = ',')]
    pub p_values: Option<Vec<usize>>,
    /// Comma-separated alpha:beta pairs (default the seven standard scenarios).
    #[arg(long, value_delimiter = ',')]
    pub scenarios: Option<Vec<String>>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Worker threads for independent cells.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long)]
    pub trips: PathBuf,
    /// Air taxis per skyport.
    #[arg(long)]
    pub servers: Option<u32>,
    /// Vehicles per hour per air taxi; derived from the longest aerial leg when omitted.
    #[arg(long)]
    pub service_rate: Option<f64>,
    /// Tolerable mean wait, minutes.
    #[arg(long)]
    pub wait_minutes: Option<f64>,
    /// Loading/unloading minutes at each end of a flight.
    #[arg(long)]
    pub load_unload: Option<f64>,
    /// Time hub arrivals with uncongested ground times.
    #[arg(long)]
    pub unscaled_access: bool,
    #[arg(long, default_value = "profiles.csv")]
    pub out_profiles: PathBuf,
    #[arg(long, default_value = "penetration.json")]
    pub out_report: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Mps,
    Geojson,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub format: ExportFormat,
    /// Required for GeoJSON.
    #[arg(long)]
    pub solution: Option<PathBuf>,
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}

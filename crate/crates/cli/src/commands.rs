use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use anyhow::anyhow;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use skyport_core::geojson::solution_feature_collection;
use skyport_core::ingest::{build_instance, parse_trips, read_zones, IngestConfig, KeepRule};
use skyport_core::queue::{
    hub_arrival_profiles, lambda_max, lambda_tolerable, market_penetration, service_rate_from_times, ProfileOptions,
    QueueSpec,
};
use skyport_core::solver::mps::export_ilp;
use skyport_core::{evaluate_hub_set, solve, Error as CoreError, HubSolution, ProblemInstance, Scenario, SolverOptions};

use crate::output::{hub_list, pct_decrease, profiles_csv, table_row, write_atomic, TABLE_HEADER};
use crate::settings::{FileConfig, ModeArg};
use crate::{AnalyzeArgs, Cli, Command, ExportArgs, ExportFormat, IngestArgs, ScenarioArgs, SolveArgs, SolverArgs, SweepArgs};

pub const EXIT_SOLVER: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

type CmdResult<T = ()> = Result<T, Failure>;

fn input(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        error: error.into(),
    }
}

/// Routing and enumeration failures are solver failures; everything else is bad input.
fn core(error: CoreError) -> Failure {
    let code = match error {
        CoreError::Unroutable { .. } | CoreError::EnumerationCap { .. } | CoreError::Unstable { .. } => EXIT_SOLVER,
        _ => EXIT_INPUT,
    };
    Failure {
        code,
        error: error.into(),
    }
}

trait InputContext<T> {
    fn input_ctx(self, what: impl FnOnce() -> String) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> InputContext<T> for Result<T, E> {
    fn input_ctx(self, what: impl FnOnce() -> String) -> CmdResult<T> {
        self.map_err(|e| input(e.into().context(what())))
    }
}

pub fn run(cli: &Cli) -> CmdResult {
    let config = FileConfig::load(cli.config.as_deref()).map_err(input)?;
    match &cli.command {
        Command::Ingest(args) => ingest(args, &config),
        Command::Solve(args) => solve_cmd(args, &config, cli.no_meta),
        Command::Sweep(args) => sweep(args, &config, cli.no_meta),
        Command::Analyze(args) => analyze(args, &config),
        Command::Export(args) => export(args, &config),
    }
}

fn open(path: &Path, what: &str) -> CmdResult<BufReader<File>> {
    if !path.exists() {
        return Err(input(anyhow!("{what} file not found: {}", path.display())));
    }
    File::open(path)
        .map(BufReader::new)
        .input_ctx(|| format!("opening {}", path.display()))
}

fn load_instance(path: &Path) -> CmdResult<ProblemInstance> {
    if !path.exists() {
        return Err(input(anyhow!("instance file not found: {}", path.display())));
    }
    let text = fs::read_to_string(path).input_ctx(|| format!("reading {}", path.display()))?;
    let instance = ProblemInstance::from_json(&text).map_err(core)?;
    let violations = instance.validate();
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().take(10).map(ToString::to_string).collect();
        return Err(input(anyhow!(
            "instance {} has {} violation(s): {}",
            path.display(),
            violations.len(),
            list.join("; ")
        )));
    }
    Ok(instance)
}

fn load_solution(path: &Path) -> CmdResult<HubSolution> {
    if !path.exists() {
        return Err(input(anyhow!("solution file not found: {}", path.display())));
    }
    let text = fs::read_to_string(path).input_ctx(|| format!("reading {}", path.display()))?;
    HubSolution::from_json(&text).map_err(core)
}

fn to_json<T: Serialize>(value: &T) -> CmdResult<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(input)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn write(path: &Path, bytes: &[u8]) -> CmdResult {
    write_atomic(path, bytes).map_err(input)
}

fn scenario_from(args: &ScenarioArgs, config: &FileConfig) -> CmdResult<Scenario> {
    let alpha = args.alpha.or(config.alpha).unwrap_or(0.0);
    let beta = args.beta.or(config.beta).unwrap_or(1.0);
    let p = args.p.or(config.p).unwrap_or(1);
    let mut s = Scenario::new(alpha, beta, p).map_err(core)?;
    s.allocation_mode = args.mode.or(config.mode).unwrap_or(ModeArg::PerPair).into();
    Ok(s)
}

fn solver_options(args: &SolverArgs, config: &FileConfig) -> CmdResult<SolverOptions> {
    let defaults = SolverOptions::default();
    let opts = SolverOptions {
        method: args.method.or(config.method).map(Into::into).unwrap_or(defaults.method),
        time_limit: args.time_limit.or(config.time_limit).unwrap_or(defaults.time_limit),
        gap_tolerance: args.gap.or(config.gap).unwrap_or(defaults.gap_tolerance),
        seed: args.seed.or(config.seed).unwrap_or(defaults.seed),
        restarts: args.restarts.or(config.restarts).unwrap_or(defaults.restarts),
        enumeration_cap: defaults.enumeration_cap,
    };
    opts.check().map_err(core)?;
    Ok(opts)
}

fn ingest(args: &IngestArgs, config: &FileConfig) -> CmdResult {
    let zones = read_zones(open(&args.zones, "zones")?).map_err(core)?;
    let (trips, parse_stats) = parse_trips(open(&args.trips, "trips")?).map_err(core)?;
    let defaults = IngestConfig::default();
    let keep = match (args.keep_zones.or(config.keep_zones), args.keep_quantile) {
        (_, Some(q)) => KeepRule::Quantile(q),
        (Some(n), None) => KeepRule::Count(n),
        (None, None) => KeepRule::All,
    };
    let cfg = IngestConfig {
        airspeed: args.airspeed.or(config.airspeed).unwrap_or(defaults.airspeed),
        load_unload: config.load_unload.unwrap_or(defaults.load_unload),
        min_trip_minutes: args.min_trip_minutes.or(config.min_trip_minutes).unwrap_or(defaults.min_trip_minutes),
        max_trip_minutes: args.max_trip_minutes.or(config.max_trip_minutes).unwrap_or(defaults.max_trip_minutes),
        keep,
    };
    let (instance, mut stats) = build_instance(&zones, &trips, &cfg).map_err(core)?;
    stats.parse = parse_stats;
    if stats.prune_clamped {
        eprintln!(
            "warning: requested more zones than available; keeping all {}",
            stats.origins_after_prune
        );
    }
    write(&args.out, &to_json(&instance)?)?;
    write(&args.stats, &to_json(&stats)?)?;
    println!(
        "instance: {} origins, {} airports, {} airport trips -> {}",
        instance.num_origins(),
        instance.num_airports(),
        stats.airport_trips,
        args.out.display()
    );
    Ok(())
}

fn baseline_objective(instance: &ProblemInstance, scenario: &Scenario) -> Option<f64> {
    evaluate_hub_set(&[], scenario, instance).ok().map(|e| e.objective)
}

fn solve_cmd(args: &SolveArgs, config: &FileConfig, no_meta: bool) -> CmdResult {
    let instance = load_instance(&args.instance)?;
    let scenario = scenario_from(&args.scenario, config)?;
    let opts = solver_options(&args.solver, config)?;
    let mut sol = solve(&instance, &scenario, &opts).map_err(core)?;
    if no_meta {
        sol.meta.wall_time_s = 0.0;
    }
    write(&args.out, &to_json(&sol)?)?;
    println!("{TABLE_HEADER}");
    println!("{}", table_row(&sol, baseline_objective(&instance, &scenario)));
    Ok(())
}

/// Standard transfer-time / congestion combinations.
const DEFAULT_SCENARIOS: [(f64, f64); 7] =
    [(0.0, 1.0), (10.0, 1.0), (10.0, 1.1), (15.0, 1.0), (15.0, 1.1), (20.0, 1.0), (20.0, 1.1)];

fn parse_scenario_pair(s: &str) -> CmdResult<(f64, f64)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| input(anyhow!("scenario `{s}` is not alpha:beta")))?;
    let a = a.trim().parse().input_ctx(|| format!("alpha in `{s}`"))?;
    let b = b.trim().parse().input_ctx(|| format!("beta in `{s}`"))?;
    Ok((a, b))
}

fn scenario_label(alpha: f64, beta: f64) -> String {
    format!("a{alpha}_b{beta}")
}

struct Cell {
    scenario: usize,
    p: usize,
    outcome: Result<HubSolution, String>,
}

fn sweep(args: &SweepArgs, config: &FileConfig, no_meta: bool) -> CmdResult {
    let instance = load_instance(&args.instance)?;
    let p_values = args.p_values.clone().unwrap_or_else(|| (0..=10).collect());
    if p_values.is_empty() || p_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(input(anyhow!("p values must be non-empty and strictly ascending")));
    }
    let pairs: Vec<(f64, f64)> = match &args.scenarios {
        Some(list) => list.iter().map(|s| parse_scenario_pair(s)).collect::<CmdResult<_>>()?,
        None => DEFAULT_SCENARIOS.to_vec(),
    };
    if pairs.is_empty() {
        return Err(input(anyhow!("no scenarios given")));
    }
    let mode = args.mode.or(config.mode).unwrap_or(ModeArg::PerPair);
    let scenarios: Vec<Scenario> = pairs
        .iter()
        .map(|&(a, b)| Scenario::new(a, b, 0).map(|s| s.with_mode(mode.into())))
        .collect::<Result<_, _>>()
        .map_err(core)?;
    let opts = solver_options(&args.solver, config)?;
    let jobs = args.jobs.or(config.jobs).unwrap_or(1).max(1);

    let grid: Vec<(usize, usize)> = (0..scenarios.len())
        .flat_map(|s| p_values.iter().map(move |&p| (s, p)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(input)?;
    let solutions_dir = args.out_dir.join("solutions");
    let cells: Vec<Cell> = pool.install(|| {
        grid.par_iter()
            .map(|&(si, p)| {
                let s = scenarios[si].with_p(p);
                let outcome = solve(&instance, &s, &opts)
                    .map(|mut sol| {
                        if no_meta {
                            sol.meta.wall_time_s = 0.0;
                        }
                        sol
                    })
                    .map_err(|e| e.to_string());
                if let Ok(sol) = &outcome {
                    let name = format!("{}_p{}.json", scenario_label(s.alpha, s.beta), p);
                    let written = serde_json::to_vec_pretty(sol)
                        .map_err(anyhow::Error::from)
                        .and_then(|b| write_atomic(&solutions_dir.join(name), &b));
                    if let Err(e) = written {
                        return Cell {
                            scenario: si,
                            p,
                            outcome: Err(format!("{e:#}")),
                        };
                    }
                }
                Cell { scenario: si, p, outcome }
            })
            .collect()
    });

    let mut normalized: Vec<Vec<String>> = vec![Vec::new(); p_values.len()];
    let mut direct: Vec<Vec<String>> = vec![Vec::new(); p_values.len()];
    for (si, s) in scenarios.iter().enumerate() {
        let baseline = baseline_objective(&instance, s);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "p",
            "objective",
            "objective_millions",
            "pct_decrease",
            "iterations",
            "time_s",
            "direct_count",
            "hubs",
            "status",
        ])
        .map_err(input)?;
        for (row, cell) in cells.iter().filter(|c| c.scenario == si).enumerate() {
            match &cell.outcome {
                Ok(sol) => {
                    w.write_record([
                        cell.p.to_string(),
                        format!("{}", sol.objective),
                        format!("{:.2}", sol.objective_millions()),
                        pct_decrease(sol.objective, baseline, cell.p),
                        sol.meta.iterations.to_string(),
                        format!("{:.3}", sol.meta.wall_time_s),
                        sol.direct_count.to_string(),
                        hub_list(&sol.hubs),
                        "ok".into(),
                    ])
                    .map_err(input)?;
                    normalized[row].push(match baseline {
                        Some(b) if b > 0.0 => format!("{}", sol.objective / b),
                        _ => String::new(),
                    });
                    direct[row].push(sol.direct_count.to_string());
                }
                Err(msg) => {
                    let mut rec = vec![cell.p.to_string()];
                    rec.extend(std::iter::repeat_n(String::new(), 7));
                    rec.push(format!("error: {msg}"));
                    w.write_record(&rec).map_err(input)?;
                    normalized[row].push(String::new());
                    direct[row].push(String::new());
                }
            }
        }
        let bytes = w.into_inner().map_err(input)?;
        write(&args.out_dir.join(format!("table_{}.csv", scenario_label(s.alpha, s.beta))), &bytes)?;
    }

    let labels: Vec<String> = scenarios.iter().map(|s| scenario_label(s.alpha, s.beta)).collect();
    for (name, rows) in [("normalized_objective.csv", &normalized), ("direct_connections.csv", &direct)] {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["p".to_string()];
        header.extend(labels.iter().cloned());
        w.write_record(&header).map_err(input)?;
        for (p, row) in p_values.iter().zip(rows) {
            let mut rec = vec![p.to_string()];
            rec.extend(row.iter().cloned());
            w.write_record(&rec).map_err(input)?;
        }
        write(&args.out_dir.join(name), &w.into_inner().map_err(input)?)?;
    }

    let failures = cells.iter().filter(|c| c.outcome.is_err()).count();
    println!(
        "sweep: {} scenarios x {} p values, {} failed cells -> {}",
        scenarios.len(),
        p_values.len(),
        failures,
        args.out_dir.display()
    );
    Ok(())
}

fn analyze(args: &AnalyzeArgs, config: &FileConfig) -> CmdResult {
    let instance = load_instance(&args.instance)?;
    let solution = load_solution(&args.solution)?;
    let (trips, _) = parse_trips(open(&args.trips, "trips")?).map_err(core)?;
    let filter = IngestConfig {
        min_trip_minutes: config.min_trip_minutes.unwrap_or(IngestConfig::default().min_trip_minutes),
        max_trip_minutes: config.max_trip_minutes.unwrap_or(IngestConfig::default().max_trip_minutes),
        ..IngestConfig::default()
    };
    let trips: Vec<_> = trips.into_iter().filter(|t| filter.retains(t)).collect();
    let options = ProfileOptions {
        congested_access: !args.unscaled_access,
    };
    let arrivals =
        hub_arrival_profiles(&solution, &trips, &solution.scenario, &instance, options).map_err(core)?;

    let load_unload = args.load_unload.or(config.load_unload).unwrap_or(IngestConfig::default().load_unload);
    let max_aerial = instance.aerial_cost.iter().flatten().flatten().copied().fold(0.0, f64::max);
    let service_rate = match args.service_rate.or(config.service_rate) {
        Some(mu) => mu,
        None => service_rate_from_times(max_aerial, load_unload).map_err(core)?,
    };
    let spec = QueueSpec {
        servers: args.servers.or(config.servers).unwrap_or(12),
        service_rate,
        wait_target: args.wait_minutes.or(config.wait_minutes).unwrap_or(5.0) / 60.0,
    };
    let tolerable = lambda_tolerable(&spec).map_err(core)?;
    let peak = if arrivals.profiles.is_empty() {
        None
    } else {
        Some(lambda_max(&arrivals.profiles).map_err(core)?)
    };
    let penetration = peak.and_then(|m| market_penetration(tolerable.floor as f64, m).ok());

    write(&args.out_profiles, &profiles_csv(&arrivals.profiles).map_err(input)?)?;
    let report = json!({
        "hubs": solution.hubs,
        "scenario": solution.scenario,
        "days": arrivals.days,
        "skipped_trips": arrivals.skipped_trips,
        "assigned_trips": arrivals.assigned,
        "peaks": arrivals.profiles.iter().map(|p| json!({"hub": p.hub, "peak": p.peak})).collect::<Vec<_>>(),
        "lambda_max": peak,
        "lambda_tol": tolerable.lambda,
        "lambda_tol_floor": tolerable.floor,
        "servers": spec.servers,
        "service_rate": spec.service_rate,
        "max_aerial_minutes": max_aerial,
        "wait_target_minutes": spec.wait_target * 60.0,
        "penetration": penetration.map(|r| r.penetration),
        "penetration_percent": penetration.map(|r| r.percent_2dp()),
        "full_coverage": peak.is_some_and(|m| m <= tolerable.floor as f64),
    });
    write(&args.out_report, &to_json(&report)?)?;
    match (peak, penetration) {
        (Some(m), Some(r)) => println!(
            "lambda_max {m:.2} veh/h, lambda_tol {} veh/h, penetration {:.2}%",
            tolerable.floor,
            r.percent_2dp()
        ),
        _ => println!("no hub arrivals; lambda_tol {} veh/h", tolerable.floor),
    }
    Ok(())
}

fn export(args: &ExportArgs, config: &FileConfig) -> CmdResult {
    let instance = load_instance(&args.instance)?;
    let bytes = match args.format {
        ExportFormat::Mps => {
            let scenario = scenario_from(&args.scenario, config)?;
            export_ilp(&instance, &scenario).map_err(core)?.into_bytes()
        }
        ExportFormat::Geojson => {
            let Some(path) = &args.solution else {
                return Err(input(anyhow!("--solution is required for geojson export")));
            };
            let solution = load_solution(path)?;
            let fc = solution_feature_collection(&instance, &solution).map_err(core)?;
            to_json(&fc)?
        }
    };
    write(&args.out, &bytes)?;
    Ok(())
}

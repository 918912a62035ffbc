//! Command implementations and exit codes.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use thiserror::Error;

use unicycle_core::navigation::{simulate, SimError, TerminalStatus};
use unicycle_core::prediction::PredictorKind;

use crate::compare::{compare, write_report};
use crate::output::{write_trajectory, RunSummary};
use crate::scenario::{check_initial_safety, parse_scenario, LoadedScenario};
use crate::svg::{scene_svg, speeds_svg};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SIM_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("simulation failed: {0}")]
    Simulation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Validation(_) => EXIT_VALIDATION,
            AppError::Simulation(_) => EXIT_SIM_FAILURE,
            AppError::Io { .. } => EXIT_IO,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> AppError + '_ {
    move |source| AppError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> AppError + '_ {
    move |e| AppError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

pub fn load(path: &Path) -> Result<LoadedScenario, AppError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_scenario(&text).map_err(|e| AppError::Validation(e.to_string()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), AppError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn write_csv_log(path: &Path, rows: &[unicycle_core::navigation::LogRow]) -> Result<(), AppError> {
    let f = fs::File::create(path).map_err(io_err(path))?;
    write_trajectory(BufWriter::new(f), rows).map_err(csv_err(path))
}

#[derive(Debug, Clone, Default)]
pub struct SimulateOptions {
    pub predictor: Option<PredictorKind>,
    pub dt: Option<f64>,
    pub horizon: Option<f64>,
}

fn apply_overrides(loaded: &mut LoadedScenario, opts: &SimulateOptions) -> Result<(), AppError> {
    let s = &mut loaded.scenario;
    if let Some(kind) = opts.predictor {
        *s = s.with_predictor(kind);
    }
    if let Some(dt) = opts.dt {
        s.settings.dt = dt;
    }
    if let Some(h) = opts.horizon {
        s.settings.horizon = h;
    }
    if !(s.settings.dt > 0.0 && s.settings.horizon > 0.0) {
        return Err(AppError::Validation("dt and horizon must be positive".into()));
    }
    check_initial_safety(s).map_err(|e| AppError::Validation(e.to_string()))
}

fn sim_error(e: SimError) -> AppError {
    match e {
        SimError::UnsafeStart { .. } => AppError::Validation(e.to_string()),
        other => AppError::Simulation(other.to_string()),
    }
}

/// Runs one simulation and writes `trajectory.csv` and `scene.svg` into `out`.
pub fn run_simulate(scenario_path: &Path, opts: &SimulateOptions, out: &Path) -> Result<RunSummary, AppError> {
    let mut loaded = load(scenario_path)?;
    apply_overrides(&mut loaded, opts)?;
    let scenario = &loaded.scenario;
    fs::create_dir_all(out).map_err(io_err(out))?;

    let log = simulate(scenario).map_err(sim_error)?;
    let summary = RunSummary::new(&log, &scenario.environment);
    write_csv_log(&out.join("trajectory.csv"), &log.rows)?;
    write_file(
        &out.join("scene.svg"),
        &scene_svg(scenario, &log.rows, loaded.output.snapshot_interval),
    )?;

    println!(
        "predictor={} status={} steps={} travel_time={:.3} mean_speed={:.4} min_clearance={:.4} domain_exits={}",
        scenario.predictor.kind,
        summary.status.label(),
        log.rows.len() - 1,
        summary.travel_time,
        summary.mean_speed,
        summary.min_clearance,
        log.domain_exits
    );
    if summary.status != TerminalStatus::Reached {
        return Err(AppError::Simulation(format!(
            "run ended with status {}",
            summary.status.label()
        )));
    }
    Ok(summary)
}

/// Parses a comma-separated predictor list.
pub fn parse_predictor_list(list: &str) -> Result<Vec<PredictorKind>, AppError> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse().map_err(|e: unicycle_core::prediction::UnknownPredictor| AppError::Validation(e.to_string())))
        .collect()
}

/// Runs every predictor, writes one trajectory per predictor, then the
/// merged `comparison.csv` and `speeds.svg`.
pub fn run_compare(scenario_path: &Path, kinds: &[PredictorKind], out: &Path) -> Result<(), AppError> {
    let loaded = load(scenario_path)?;
    let outcomes =
        compare(&loaded.scenario, kinds).map_err(|e| AppError::Validation(e.to_string()))?;
    fs::create_dir_all(out).map_err(io_err(out))?;

    let mut failures = Vec::new();
    for (i, o) in outcomes.iter().enumerate() {
        match &o.result {
            Ok((log, s)) => {
                let dir = out.join(format!("{i}_{}", o.kind.label()));
                fs::create_dir_all(&dir).map_err(io_err(&dir))?;
                write_csv_log(&dir.join("trajectory.csv"), &log.rows)?;
                println!(
                    "predictor={} status={} travel_time={:.3} mean_speed={:.4} min_clearance={:.4}",
                    o.kind,
                    s.status.label(),
                    s.travel_time,
                    s.mean_speed,
                    s.min_clearance
                );
                if s.status != TerminalStatus::Reached {
                    failures.push(format!("{}: {}", o.kind, s.status.label()));
                }
            }
            Err(e) => {
                println!("predictor={} error={e}", o.kind);
                failures.push(format!("{}: {e}", o.kind));
            }
        }
    }

    let report = out.join("comparison.csv");
    let f = fs::File::create(&report).map_err(io_err(&report))?;
    write_report(BufWriter::new(f), &outcomes).map_err(csv_err(&report))?;
    let runs: Vec<_> = outcomes
        .iter()
        .filter_map(|o| o.result.as_ref().ok().map(|(log, _)| (o.kind, log.rows.as_slice())))
        .collect();
    write_file(&out.join("speeds.svg"), &speeds_svg(&runs))?;

    if failures.is_empty() {
        Ok(())
    } else {
        Err(AppError::Simulation(failures.join("; ")))
    }
}

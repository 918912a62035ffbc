//! Trajectory CSV files and per-run summaries.

use std::io::{Read, Write};

use thiserror::Error;

use unicycle_core::environment::Environment;
use unicycle_core::geometry::Point2;
use unicycle_core::navigation::{LogRow, TerminalStatus, TrajectoryLog};

pub const TRAJECTORY_HEADER: [&str; 9] = ["t", "x", "y", "theta", "gx", "gy", "sigma", "v", "omega"];

/// Fixed-point with 9 decimals, for diff-stable files.
pub fn fixed(v: f64) -> String {
    let s = format!("{v:.9}");
    // Avoid "-0.000000000".
    if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub fn write_trajectory<W: Write>(out: W, rows: &[LogRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for r in rows {
        w.write_record([r.t, r.x, r.y, r.theta, r.gx, r.gy, r.sigma, r.v, r.omega].map(fixed))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
}

pub fn read_trajectory<R: Read>(input: R) -> Result<Vec<LogRow>, ReadError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != TRAJECTORY_HEADER {
        return Err(ReadError::Header(header));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let mut v = [0.0; 9];
        for (slot, field) in v.iter_mut().zip(rec.iter()) {
            *slot = field.parse().map_err(|e| ReadError::Row {
                row: i + 1,
                message: format!("`{field}`: {e}"),
            })?;
        }
        rows.push(LogRow {
            t: v[0],
            x: v[1],
            y: v[2],
            theta: v[3],
            gx: v[4],
            gy: v[5],
            sigma: v[6],
            v: v[7],
            omega: v[8],
        });
    }
    Ok(rows)
}

/// Headline numbers of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSummary {
    pub status: TerminalStatus,
    /// Time the goal was reached, or the simulated span otherwise (s).
    pub travel_time: f64,
    pub mean_speed: f64,
    /// Smallest logged distance from the robot to the free-space boundary (m).
    pub min_clearance: f64,
}

impl RunSummary {
    pub fn new(log: &TrajectoryLog, env: &Environment) -> Self {
        let min_clearance = log
            .rows
            .iter()
            .map(|r| env.obstacle_distance(Point2::new(r.x, r.y)) - env.robot_radius())
            .fold(f64::INFINITY, f64::min);
        Self {
            status: log.status,
            travel_time: log.reached_at.unwrap_or(log.final_row().t),
            mean_speed: log.mean_speed(),
            min_clearance,
        }
    }
}

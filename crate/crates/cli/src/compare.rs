//! Running one scenario under several predictors.

use rayon::prelude::*;
use thiserror::Error;

use unicycle_core::navigation::{simulate, Scenario, SimError, TrajectoryLog};
use unicycle_core::prediction::PredictorKind;

use crate::output::{fixed, RunSummary};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("compare needs at least 2 predictors, got {0}")]
pub struct TooFewPredictors(pub usize);

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub kind: PredictorKind,
    pub result: Result<(TrajectoryLog, RunSummary), SimError>,
}

/// Simulates `scenario` once per predictor, in parallel. Failed runs are
/// reported in place without stopping the others.
pub fn compare(scenario: &Scenario, kinds: &[PredictorKind]) -> Result<Vec<RunOutcome>, TooFewPredictors> {
    if kinds.len() < 2 {
        return Err(TooFewPredictors(kinds.len()));
    }
    Ok(kinds
        .par_iter()
        .map(|&kind| {
            let variant = scenario.with_predictor(kind);
            let result = simulate(&variant).map(|log| {
                let summary = RunSummary::new(&log, &variant.environment);
                (log, summary)
            });
            RunOutcome { kind, result }
        })
        .collect())
}

pub const REPORT_HEADER: [&str; 5] = ["predictor", "status", "travel_time", "mean_speed", "min_clearance"];

pub fn write_report<W: std::io::Write>(out: W, outcomes: &[RunOutcome]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for o in outcomes {
        match &o.result {
            Ok((_, s)) => w.write_record([
                o.kind.label().to_string(),
                s.status.label().to_string(),
                fixed(s.travel_time),
                fixed(s.mean_speed),
                fixed(s.min_clearance),
            ])?,
            Err(e) => w.write_record([o.kind.label(), &format!("error: {e}"), "", "", ""])?,
        }
    }
    w.flush()?;
    Ok(())
}

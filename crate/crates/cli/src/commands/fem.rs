use elastab::fem::{loglog_slope, sweep, SweepSpec, SweepTable};
use serde::Serialize;

use super::Outcome;
use crate::output::to_value;
use crate::CliError;

/// `κ_S` window of the reported log–log slope.
pub const SLOPE_WINDOW: (f64, f64) = (2.0, 8.0);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepSummary {
    pub rows: usize,
    pub failed_rows: usize,
    pub violations: usize,
    pub slope: Option<f64>,
    pub max_lambda_spread: Option<f64>,
    pub doubling: Vec<f64>,
}

pub fn summarize(table: &SweepTable) -> SweepSummary {
    SweepSummary {
        rows: table.rows.len(),
        failed_rows: table.rows.iter().filter(|r| r.error.is_some()).count(),
        violations: table.rows.iter().filter(|r| r.slack.is_some_and(|s| s < 0.0)).count(),
        slope: loglog_slope(&table.rows, SLOPE_WINDOW.0, SLOPE_WINDOW.1),
        max_lambda_spread: table.lambda_spread.iter().map(|s| s.max_over_min).reduce(f64::max),
        doubling: table.doubling.iter().map(|d| d.ratio).collect(),
    }
}

pub fn run(spec: &SweepSpec) -> Result<Outcome, CliError> {
    spec.validate().map_err(CliError::from_core)?;
    let table = sweep(spec).map_err(CliError::from_core)?;
    let summary = summarize(&table);
    let pass = summary.failed_rows == 0 && summary.violations == 0;
    let line =
        format!("{} sweep rows, {} failed, {} bound violations", summary.rows, summary.failed_rows, summary.violations);
    Ok(Outcome {
        tables: vec![
            ("fem_sweep".into(), table.rows.iter().map(to_value).collect::<Result<_, _>>()?),
            ("fem_sweep_summary".into(), vec![to_value(&summary)?]),
        ],
        pass,
        summary: line,
    })
}

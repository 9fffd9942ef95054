//! `qjd simulate`: trajectory, stationary measure and their comparison.

use std::fs::File;
use std::io::BufWriter;

use serde::Serialize;

use super::{emit, RunConfig};
use crate::dynamics::{
    compare_with_stationary, sector_start, simulate, stationary_measure, FrontierPolicy,
    SimulationComparison, SimulationConfig,
};
use crate::qalgebra::{Params, ParamsSummary};
use crate::report::fix_floats;
use crate::Result;

#[derive(Serialize)]
struct TrajectorySummary {
    start: String,
    jumps: usize,
    end_time: f64,
    truncated: bool,
}

#[derive(Serialize)]
struct SimulateOutput {
    check: &'static str,
    params: ParamsSummary,
    horizon: f64,
    trajectory: TrajectorySummary,
    comparison: SimulationComparison,
    /// Truncation allowance on the total variation: mass beyond the window.
    tolerance: f64,
    provenance: &'static str,
}

/// Never fails on statistics; only configuration problems are errors.
pub fn run(cfg: &RunConfig, base: &Params) -> Result<bool> {
    let n = cfg.n.unwrap_or(1);
    let k = cfg.k.unwrap_or(10);
    let horizon = cfg.horizon.unwrap_or(1000.0);
    if horizon.is_nan() || horizon < 0.0 {
        return Err(crate::Error::Constraint(format!(
            "horizon must be nonnegative, got {horizon}"
        )));
    }
    let params = base.shift_level(n);
    let measure = stationary_measure(&params, n, k)?;
    let biggest = measure
        .sectors
        .iter()
        .max_by(|a, b| a.mass.total_cmp(&b.mass))
        .expect("at least one sector");
    let start = sector_start(biggest.plus, biggest.minus, n);
    let config = SimulationConfig {
        horizon,
        max_events: Some(cfg.trajectory_events),
        k,
        policy: FrontierPolicy::Reflect,
        seed: cfg.seed,
    };
    let trajectory = simulate(&start, &params, n, &config)?;
    let comparison = compare_with_stationary(&params, n, k, horizon, cfg.events, cfg.seed)?;

    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir)?;
        trajectory.write_csv(BufWriter::new(File::create(dir.join("trajectory.csv"))?))?;
        measure.write_csv(BufWriter::new(File::create(dir.join("measure.csv"))?))?;
    }
    let out = SimulateOutput {
        check: "simulate",
        params: base.summary(),
        horizon,
        trajectory: TrajectorySummary {
            start: start.to_string(),
            jumps: trajectory.jumps(),
            end_time: trajectory.end_time,
            truncated: trajectory.truncated,
        },
        tolerance: comparison.tail.tail_mass,
        comparison,
        provenance: "float",
    };
    let text = serde_json::to_string_pretty(&fix_floats(serde_json::to_value(&out)?))?;
    let json_path = cfg.out.as_ref().map(|d| d.join("comparison.json"));
    emit(&text, json_path.as_ref())?;
    Ok(true)
}

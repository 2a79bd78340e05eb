use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{io_err, Result};
use linchirp::filter::{DenoiseReport, StopReason};

/// JSON run report. `params` is a sorted map, so identical runs produce
/// byte-identical files.
#[derive(Serialize)]
pub struct Report {
    pub method: String,
    pub params: Map<String, Value>,
    pub frames: Vec<FrameJson>,
    pub mae: Option<f64>,
}

#[derive(Serialize)]
pub struct FrameJson {
    pub residual_energies: Vec<f64>,
    pub components: Vec<ComponentJson>,
    pub stop_reason: &'static str,
}

#[derive(Serialize)]
pub struct ComponentJson {
    pub k: usize,
    pub m: i64,
    pub beta: f64,
    pub energy: f64,
}

pub fn stop_reason_name(reason: StopReason) -> &'static str {
    match reason {
        StopReason::ThresholdReached => "threshold_reached",
        StopReason::BudgetExhausted => "budget_exhausted",
        StopReason::NoSignificantPeak => "no_significant_peak",
    }
}

/// Flattens the filter's per-frame trace into the report shape.
pub fn frames_json(report: &DenoiseReport) -> Vec<FrameJson> {
    report
        .frames
        .iter()
        .map(|f| FrameJson {
            residual_energies: f.residual_energies.clone(),
            components: f
                .components
                .iter()
                .map(|c| ComponentJson { k: c.k, m: c.m, beta: c.beta, energy: c.energy })
                .collect(),
            stop_reason: stop_reason_name(f.stop_reason),
        })
        .collect()
}

pub fn write_report(path: &Path, report: &Report) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("report serialization");
    text.push('\n');
    fs::write(path, text).map_err(|e| io_err(path, e))
}

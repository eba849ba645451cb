//! Result tables on disk.
//!
//! A run writes up to five files into the output directory:
//!
//! | file          | rows                                   |
//! |---------------|----------------------------------------|
//! | `trials.csv`  | one per (case, seed): [`TrialRow`]     |
//! | `cases.csv`   | one per case: [`CaseRow`]              |
//! | `trials.json` | same rows as `trials.csv`              |
//! | `cases.json`  | same rows as `cases.csv`               |
//! | `suite.json`  | run metadata and gate verdict: [`SuiteSummary`] |
//!
//! Brick cases fill `row`/`col`; angle cases fill `angle_deg`. Median step
//! columns count failed trials at the full budget. Output depends only on the
//! [`SuiteResult`], so re-emitting gives byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::suite::SuiteResult;
use crate::suites::{CaseKey, ExpectedOutcome, Requirement};
use crate::trial::{Outcome, ServeSide};

pub const RESULTS_SCHEMA: &str = "toybox-results/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Both,
}

impl Format {
    fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }

    fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub case_id: String,
    pub requirement: Requirement,
    pub seed: u64,
    pub outcome: Outcome,
    pub frames_used: u64,
    pub agent_steps_used: u64,
    pub final_score: u64,
    pub serve: Option<ServeSide>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRow {
    pub case_id: String,
    pub requirement: Requirement,
    pub row: Option<usize>,
    pub col: Option<usize>,
    pub angle_deg: Option<f64>,
    pub expected_outcome: Option<ExpectedOutcome>,
    pub budget_frames: u64,
    pub trials: u64,
    pub successes: u64,
    pub deaths: u64,
    pub timeouts: u64,
    pub success_rate: f64,
    pub median_frames: f64,
    pub median_agent_steps: f64,
    pub reciprocal_median: f64,
    pub reciprocal_median_agent_steps: f64,
    pub mean_score: f64,
    pub max_score: u64,
    pub median_score: f64,
    pub p25_score: f64,
    pub p75_score: f64,
    pub passing_trials: u64,
    pub gate_pass: bool,
    pub gate_exempt: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub schema: String,
    pub agent: String,
    pub frame_skip: u32,
    pub trials_per_case: u32,
    pub base_seed: u64,
    pub gate_threshold: f64,
    pub cases: usize,
    pub gate_pass: bool,
    pub failing_cases: Vec<String>,
}

pub fn trial_rows(result: &SuiteResult) -> Vec<TrialRow> {
    result
        .cases
        .iter()
        .flat_map(|c| {
            c.trials.iter().map(move |t| TrialRow {
                case_id: t.case_id.clone(),
                requirement: c.requirement,
                seed: t.seed,
                outcome: t.outcome,
                frames_used: t.frames_used,
                agent_steps_used: t.agent_steps_used,
                final_score: t.final_score,
                serve: t.serve,
            })
        })
        .collect()
}

pub fn case_rows(result: &SuiteResult) -> Vec<CaseRow> {
    result
        .cases
        .iter()
        .map(|c| {
            let (row, col, angle_deg) = match c.key {
                CaseKey::Brick { row, col } => (Some(row), Some(col), None),
                CaseKey::Angle { deg } => (None, None, Some(deg)),
            };
            let a = &c.aggregate;
            CaseRow {
                case_id: c.id.clone(),
                requirement: c.requirement,
                row,
                col,
                angle_deg,
                expected_outcome: c.expected_outcome,
                budget_frames: c.budget_frames,
                trials: a.trials,
                successes: a.successes,
                deaths: a.deaths,
                timeouts: a.timeouts,
                success_rate: a.success_rate,
                median_frames: a.median_frames,
                median_agent_steps: a.median_agent_steps,
                reciprocal_median: a.reciprocal_median,
                reciprocal_median_agent_steps: a.reciprocal_median_agent_steps,
                mean_score: a.mean_score,
                max_score: a.max_score,
                median_score: a.median_score,
                p25_score: a.p25_score,
                p75_score: a.p75_score,
                passing_trials: c.gate.passing_trials,
                gate_pass: c.gate.pass,
                gate_exempt: c.gate.exempt,
            }
        })
        .collect()
}

pub fn summary(result: &SuiteResult) -> SuiteSummary {
    SuiteSummary {
        schema: RESULTS_SCHEMA.into(),
        agent: result.agent.clone(),
        frame_skip: result.frame_skip,
        trials_per_case: result.trials_per_case,
        base_seed: result.base_seed,
        gate_threshold: result.gate_threshold,
        cases: result.cases.len(),
        gate_pass: result.gate_pass(),
        failing_cases: result.failing_cases().map(|c| c.id.clone()).collect(),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_owned(),
        source,
    }
}

fn csv_bytes<R: Serialize>(rows: &[R]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| HarnessError::Io {
        path: PathBuf::from("<csv buffer>"),
        source: e.into_error(),
    })
}

fn json_bytes<V: Serialize + ?Sized>(value: &V) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes the result tables into `dir`, creating it if needed. Returns the
/// paths written, in a fixed order.
pub fn emit_results(result: &SuiteResult, dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let trials = trial_rows(result);
    let cases = case_rows(result);
    let mut files: Vec<(&str, Vec<u8>)> = Vec::new();
    if format.csv() {
        files.push(("trials.csv", csv_bytes(&trials)?));
        files.push(("cases.csv", csv_bytes(&cases)?));
    }
    if format.json() {
        files.push(("trials.json", json_bytes(&trials)?));
        files.push(("cases.json", json_bytes(&cases)?));
    }
    files.push(("suite.json", json_bytes(&summary(result))?));

    let mut written = Vec::with_capacity(files.len());
    for (name, bytes) in files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(io_err(&path))?;
        written.push(path);
    }
    Ok(written)
}

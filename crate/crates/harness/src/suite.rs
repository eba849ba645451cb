//! Many seeds over many cases.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use toybox_core::{Agent, AgentError, Scalar};

use crate::error::{HarnessError, Result};
use crate::stats::CaseAggregate;
use crate::suites::{CaseKey, ExpectedOutcome, Requirement, SuccessPredicate, TestCase};
use crate::trial::{run_trial, Outcome, TrialParams, TrialResult};

pub const DEFAULT_TRIALS: u32 = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    /// Recorded in the emitted metadata.
    pub agent: String,
    pub trials: u32,
    /// Trial `i` uses seed `base_seed + i` for the env and the agent.
    pub base_seed: u64,
    pub frame_skip: u32,
    pub render: bool,
    pub parallel: bool,
    /// Fraction of passing trials a case needs to pass the gate.
    pub gate_threshold: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            agent: String::new(),
            trials: DEFAULT_TRIALS,
            base_seed: 0,
            frame_skip: 4,
            render: false,
            parallel: true,
            gate_threshold: 1.0,
        }
    }
}

impl SuiteOptions {
    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..u64::from(self.trials)).map(|i| self.base_seed.wrapping_add(i))
    }
}

/// Whether one trial meets its requirement. Catching the ball is what R2
/// asks for, so surviving the budget passes; R1 and R3 need the target gone.
pub fn trial_passes(requirement: Requirement, outcome: Outcome) -> bool {
    match requirement {
        Requirement::R2 => outcome != Outcome::Death,
        Requirement::R1 | Requirement::R3 => outcome == Outcome::Success,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseGate {
    pub passing_trials: u64,
    pub pass: bool,
    /// Annotated cases are reported but do not affect the suite verdict.
    pub exempt: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub requirement: Requirement,
    pub key: CaseKey,
    pub success_predicate: SuccessPredicate,
    pub budget_frames: u64,
    pub expected_outcome: Option<ExpectedOutcome>,
    pub trials: Vec<TrialResult>,
    pub aggregate: CaseAggregate,
    pub gate: CaseGate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub agent: String,
    pub frame_skip: u32,
    pub trials_per_case: u32,
    pub base_seed: u64,
    pub gate_threshold: f64,
    pub cases: Vec<CaseResult>,
}

impl SuiteResult {
    /// True when every non-annotated case passes.
    pub fn gate_pass(&self) -> bool {
        self.cases.iter().all(|c| c.gate.exempt || c.gate.pass)
    }

    pub fn failing_cases(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.gate.exempt && !c.gate.pass)
    }
}

/// Runs `options.trials` seeded trials of every case, each with a fresh
/// agent from `make_agent(seed)`.
///
/// Results come back in case order, then seed order, whatever the
/// scheduling. The first failing trial in that order is the reported error.
pub fn run_suite<T, F>(cases: &[TestCase], make_agent: F, options: &SuiteOptions) -> Result<SuiteResult>
where
    T: Scalar,
    F: Fn(u64) -> std::result::Result<Box<dyn Agent<T>>, AgentError> + Sync,
{
    if options.trials == 0 {
        return Err(HarnessError::InvalidArgument {
            arg: "trials",
            reason: "must be at least 1".into(),
        });
    }
    if !(0.0..=1.0).contains(&options.gate_threshold) {
        return Err(HarnessError::InvalidArgument {
            arg: "gate_threshold",
            reason: format!("{} is not in [0, 1]", options.gate_threshold),
        });
    }
    let jobs: Vec<(&TestCase, u64)> = cases
        .iter()
        .flat_map(|case| options.seeds().map(move |seed| (case, seed)))
        .collect();
    let run = |&(case, seed): &(&TestCase, u64)| -> Result<TrialResult> {
        let mut agent = make_agent(seed).map_err(|source| HarnessError::Agent {
            case_id: case.id.clone(),
            seed,
            source,
        })?;
        agent.seed(seed);
        let params = TrialParams {
            frame_skip: options.frame_skip,
            seed,
            render: options.render,
        };
        run_trial(case, agent.as_mut(), params)
    };
    let results: Vec<Result<TrialResult>> = if options.parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    let mut results = results.into_iter();

    let per_case = options.trials as usize;
    let mut out = Vec::with_capacity(cases.len());
    for case in cases {
        let trials = results.by_ref().take(per_case).collect::<Result<Vec<_>>>()?;
        let aggregate =
            CaseAggregate::from_trials(&trials, case.budget_frames, options.frame_skip).expect("at least one trial");
        let passing = trials
            .iter()
            .filter(|t| trial_passes(case.requirement, t.outcome))
            .count() as u64;
        let gate = CaseGate {
            passing_trials: passing,
            pass: passing as f64 >= options.gate_threshold * trials.len() as f64,
            exempt: case.expected_outcome.is_some(),
        };
        out.push(CaseResult {
            id: case.id.clone(),
            requirement: case.requirement,
            key: case.key,
            success_predicate: case.success_predicate,
            budget_frames: case.budget_frames,
            expected_outcome: case.expected_outcome,
            trials,
            aggregate,
            gate,
        });
    }
    Ok(SuiteResult {
        agent: options.agent.clone(),
        frame_skip: options.frame_skip,
        trials_per_case: options.trials,
        base_seed: options.base_seed,
        gate_threshold: options.gate_threshold,
        cases: out,
    })
}

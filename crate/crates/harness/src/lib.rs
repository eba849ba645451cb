//! Behavioral acceptance testing for Breakout agents.
//!
//! * [`suites`]: R1 (clear each brick alone), R2 (catch the ball at any
//!   launch angle) and R3 (finish a tunnel to the roof) test cases, each an
//!   intervened state document.
//! * [`trial`]: one agent on one case under one seed, single life, single
//!   level, fixed frame budget.
//! * [`suite`]: seeded trials over a whole suite, serial or parallel, with
//!   per-case aggregates and a pass/fail gate.
//! * [`emit`]: CSV and JSON result tables.

mod error;

pub mod emit;
pub mod stats;
pub mod suite;
pub mod suites;
pub mod trial;

pub use emit::{emit_results, Format};
pub use error::{HarnessError, Result};
pub use stats::CaseAggregate;
pub use suite::{run_suite, trial_passes, CaseResult, SuiteOptions, SuiteResult, DEFAULT_TRIALS};
pub use suites::{
    default_angles, gen_r1_suite, gen_r2_suite, gen_r3_suite, gen_suite, CaseKey, ExpectedOutcome, Requirement,
    SuccessPredicate, TestCase, DEFAULT_BUDGET_FRAMES,
};
pub use trial::{run_trial, Outcome, ServeSide, TrialParams, TrialResult};

//! Test-case generators for the three behavioral requirements.
//!
//! Every case is an intervened [`StateDocument`]: a real game state edited
//! into the scenario under test, so the trial runner needs nothing beyond
//! the ordinary import path.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use toybox_core::config::FRAMES_PER_SECOND;
use toybox_core::intervention::{set_ball, set_brick, set_lives, set_score};
use toybox_core::{
    brick_value, export_state, level_total_score, new_game, GameConfig, GameState, Scalar, StateDocument, Vec2,
};

use crate::error::{HarnessError, Result};

/// Four minutes of play.
pub const DEFAULT_BUDGET_FRAMES: u64 = 4 * 60 * FRAMES_PER_SECOND as u64;

pub const DEFAULT_ANGLE_STEP_DEG: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Requirement {
    /// Eliminate each brick in isolation.
    R1,
    /// Catch the ball whatever its initial trajectory.
    R2,
    /// Open a tunnel to the roof.
    R3,
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Requirement::R1 => "R1",
            Requirement::R2 => "R2",
            Requirement::R3 => "R3",
        })
    }
}

impl FromStr for Requirement {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r1" => Ok(Requirement::R1),
            "r2" => Ok(Requirement::R2),
            "r3" => Ok(Requirement::R3),
            _ => Err(HarnessError::InvalidArgument {
                arg: "suite",
                reason: format!("{s:?} is not one of r1, r2, r3"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuccessPredicate {
    TargetBrickCleared { row: usize, col: usize },
    LevelCleared,
    ScoreAtLeast(u64),
}

impl SuccessPredicate {
    pub fn holds<T: Scalar>(&self, state: &GameState<T>, config: &GameConfig<T>) -> bool {
        match *self {
            SuccessPredicate::TargetBrickCleared { row, col } => {
                state.brick(config, row, col).is_ok_and(|alive| !alive)
            }
            SuccessPredicate::LevelCleared => state.live_brick_count() == 0,
            SuccessPredicate::ScoreAtLeast(n) => state.score >= n,
        }
    }
}

/// Known-degenerate cases carry the outcome they are expected to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedOutcome {
    Pass,
    Fail,
}

/// What a case varies: a brick cell or a launch angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseKey {
    Brick { row: usize, col: usize },
    Angle { deg: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCase {
    pub id: String,
    pub requirement: Requirement,
    pub key: CaseKey,
    pub start: StateDocument,
    pub success_predicate: SuccessPredicate,
    pub budget_frames: u64,
    pub expected_outcome: Option<ExpectedOutcome>,
}

impl TestCase {
    pub fn with_budget(mut self, budget_frames: u64) -> Self {
        self.budget_frames = budget_frames;
        self
    }
}

/// Replaces every case's budget, rejecting zero.
pub fn set_budget(cases: &mut [TestCase], budget_frames: u64) -> Result<()> {
    if budget_frames == 0 {
        return Err(HarnessError::InvalidArgument {
            arg: "budget_frames",
            reason: "must be positive".into(),
        });
    }
    for case in cases {
        case.budget_frames = budget_frames;
    }
    Ok(())
}

/// `0, step, 2*step, ...` below 360.
pub fn angle_sweep(step_deg: f64) -> Result<Vec<f64>> {
    if !(step_deg.is_finite() && step_deg > 0.0 && step_deg <= 360.0) {
        return Err(HarnessError::InvalidArgument {
            arg: "angle step",
            reason: format!("{step_deg} is not in (0, 360]"),
        });
    }
    Ok((0..)
        .map(|i| f64::from(i) * step_deg)
        .take_while(|&a| a < 360.0)
        .collect())
}

pub fn default_angles() -> Vec<f64> {
    angle_sweep(DEFAULT_ANGLE_STEP_DEG).expect("valid default step")
}

fn brick_id(req: Requirement, row: usize, col: usize) -> String {
    format!("{}-r{row}c{col}", req.to_string().to_lowercase())
}

fn cells<T: Scalar>(config: &GameConfig<T>) -> impl Iterator<Item = (usize, usize)> {
    let cols = config.grid_cols as usize;
    (0..config.grid_rows as usize).flat_map(move |r| (0..cols).map(move |c| (r, c)))
}

fn single_life_game<T: Scalar>(config: &GameConfig<T>) -> Result<GameState<T>> {
    let mut state = new_game(config)?;
    set_lives(&mut state, config, 1)?;
    Ok(state)
}

/// One case per brick: only that brick alive, one life, ball awaiting a
/// serve. The score is what clearing the rest of the wall would have earned.
pub fn gen_r1_suite<T: Scalar>(config: &GameConfig<T>) -> Result<Vec<TestCase>> {
    let total = level_total_score(config);
    cells(config)
        .map(|(row, col)| {
            let mut state = single_life_game(config)?;
            state.bricks_alive.fill(false);
            set_brick(&mut state, config, row, col, true)?;
            set_score(&mut state, total - u64::from(brick_value(config, row)?));
            Ok(TestCase {
                id: brick_id(Requirement::R1, row, col),
                requirement: Requirement::R1,
                key: CaseKey::Brick { row, col },
                start: export_state(&state, config),
                success_predicate: SuccessPredicate::TargetBrickCleared { row, col },
                budget_frames: DEFAULT_BUDGET_FRAMES,
                expected_outcome: None,
            })
        })
        .collect()
}

/// One case per angle: full wall, one life, ball leaving the serve point at
/// `angle` degrees (counterclockwise from rightward) at the serve speed.
///
/// Angles whose trajectory has no vertical component can never reach a
/// brick and are annotated as expected failures.
pub fn gen_r2_suite<T: Scalar>(config: &GameConfig<T>, angles: &[f64]) -> Result<Vec<TestCase>> {
    if angles.is_empty() {
        return Err(HarnessError::InvalidArgument {
            arg: "angles",
            reason: "at least one angle is required".into(),
        });
    }
    angles
        .iter()
        .map(|&deg| {
            let mut state = single_life_game(config)?;
            let pos = Vec2::new(state.paddle_x, config.serve_y());
            set_ball(&mut state, config, pos, T::from_f64_lossy(deg), config.speed_at(0))?;
            let horizontal = state.ball_vel.y == T::zero();
            Ok(TestCase {
                id: format!("r2-{deg}deg"),
                requirement: Requirement::R2,
                key: CaseKey::Angle { deg },
                start: export_state(&state, config),
                success_predicate: SuccessPredicate::LevelCleared,
                budget_frames: DEFAULT_BUDGET_FRAMES,
                expected_outcome: horizontal.then_some(ExpectedOutcome::Fail),
            })
        })
        .collect()
}

/// One case per brick: full wall except the target's column, where only the
/// target survives. Clearing it opens the column floor to ceiling.
pub fn gen_r3_suite<T: Scalar>(config: &GameConfig<T>) -> Result<Vec<TestCase>> {
    cells(config)
        .map(|(row, col)| {
            let mut state = single_life_game(config)?;
            let mut score = 0;
            for r in (0..config.grid_rows as usize).filter(|&r| r != row) {
                set_brick(&mut state, config, r, col, false)?;
                score += u64::from(brick_value(config, r)?);
            }
            set_score(&mut state, score);
            Ok(TestCase {
                id: brick_id(Requirement::R3, row, col),
                requirement: Requirement::R3,
                key: CaseKey::Brick { row, col },
                start: export_state(&state, config),
                success_predicate: SuccessPredicate::TargetBrickCleared { row, col },
                budget_frames: DEFAULT_BUDGET_FRAMES,
                expected_outcome: None,
            })
        })
        .collect()
}

/// The suite for `requirement`; `angles` only matters for R2.
pub fn gen_suite<T: Scalar>(requirement: Requirement, config: &GameConfig<T>, angles: &[f64]) -> Result<Vec<TestCase>> {
    match requirement {
        Requirement::R1 => gen_r1_suite(config),
        Requirement::R2 => gen_r2_suite(config, angles),
        Requirement::R3 => gen_r3_suite(config),
    }
}

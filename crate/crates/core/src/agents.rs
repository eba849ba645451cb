//! The agent contract and scripted baseline agents.
//!
//! Baselines read the structured state view rather than pixels.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::GameConfig;
use crate::env::{legal_actions, Observation};
use crate::game::Action;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("agent error: {0}")]
pub struct AgentError(pub String);

/// Anything that maps observations to actions.
pub trait Agent<T: Scalar> {
    fn act(&mut self, observation: &Observation<T>) -> Result<Action, AgentError>;

    /// Reseeds any internal randomness.
    fn seed(&mut self, _seed: u64) {}

    /// Called at the start of every episode.
    fn reset(&mut self) {}
}

/// Uniform over the legal actions.
#[derive(Debug, Clone)]
pub struct RandomAgent {
    rng: ChaCha8Rng,
}

impl RandomAgent {
    pub fn new(seed: u64) -> Self {
        RandomAgent {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_action(&mut self) -> Action {
        let actions = legal_actions();
        actions[self.rng.random_range(0..actions.len())]
    }
}

impl<T: Scalar> Agent<T> for RandomAgent {
    fn act(&mut self, _observation: &Observation<T>) -> Result<Action, AgentError> {
        Ok(self.next_action())
    }

    fn seed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }
}

/// Serves when the ball is parked, otherwise steers the paddle under the ball.
///
/// The target is the ball's x one decision ahead (`frame_skip` frames of
/// travel, folded back off the side walls), and the paddle holds still within
/// a deadzone of half the paddle's travel per decision. Chasing the current x
/// instead lets the ball slip past the paddle edge when actions are held for
/// several frames.
#[derive(Debug, Clone)]
pub struct TrackerAgent<T> {
    frame_skip: u32,
    deadzone: T,
    x_min: T,
    x_max: T,
    aim_jitter: T,
    aim_offset: T,
    descending: bool,
    rng: ChaCha8Rng,
}

impl<T: Scalar> TrackerAgent<T> {
    pub fn new(config: &GameConfig<T>, frame_skip: u32) -> Self {
        let skip = frame_skip.max(1);
        let h = config.ball_half();
        TrackerAgent {
            frame_skip: skip,
            deadzone: T::units(config.paddle_speed * skip) / T::lit(2.0),
            x_min: config.inner_left() + h,
            x_max: config.inner_right() - h,
            aim_jitter: T::zero(),
            aim_offset: T::zero(),
            descending: false,
            rng: ChaCha8Rng::seed_from_u64(0),
        }
    }

    /// Aims each return at a random point up to `jitter` units off the paddle
    /// center, which varies the bounce angle. Zero keeps the agent deterministic.
    pub fn with_aim_jitter(mut self, jitter: T, seed: u64) -> Self {
        self.aim_jitter = jitter.abs();
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self
    }

    pub fn deadzone(&self) -> T {
        self.deadzone
    }

    fn fold(&self, mut x: T) -> T {
        // at most a couple of reflections for any sane speed
        for _ in 0..4 {
            if x < self.x_min {
                x = self.x_min + self.x_min - x;
            } else if x > self.x_max {
                x = self.x_max + self.x_max - x;
            } else {
                break;
            }
        }
        x
    }

    /// Action for a ball at `ball_x` moving `ball_vx` per frame and a paddle at `paddle_x`.
    pub fn steer(&mut self, ball_x: T, ball_vx: T, ball_vy: T, paddle_x: T) -> Action {
        let descending = ball_vy > T::zero();
        if descending && !self.descending && self.aim_jitter > T::zero() {
            let u = T::lit(self.rng.random_range(-1.0..=1.0));
            self.aim_offset = u * self.aim_jitter;
        }
        self.descending = descending;

        let ahead = self.fold(ball_x + ball_vx * T::units(self.frame_skip));
        let offset = ahead - self.aim_offset - paddle_x;
        if offset > self.deadzone {
            Action::Right
        } else if offset < -self.deadzone {
            Action::Left
        } else {
            Action::Noop
        }
    }
}

impl<T: Scalar> Agent<T> for TrackerAgent<T> {
    fn act(&mut self, observation: &Observation<T>) -> Result<Action, AgentError> {
        let view = &observation.state_view;
        if !view.ball_in_play() {
            return Ok(Action::Fire);
        }
        let (pos, vel) = (view.ball_pos(), view.ball_vel());
        Ok(self.steer(pos.x, vel.x, vel.y, view.paddle_x()))
    }

    fn seed(&mut self, seed: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
    }

    fn reset(&mut self) {
        self.descending = false;
        self.aim_offset = T::zero();
    }
}

/// Plays back a fixed action trace, then `Noop` forever.
#[derive(Debug, Clone)]
pub struct ReplayAgent {
    trace: Vec<Action>,
    cursor: usize,
}

impl ReplayAgent {
    pub fn new(trace: Vec<Action>) -> Result<Self, AgentError> {
        if trace.is_empty() {
            return Err(AgentError("replay trace is empty".into()));
        }
        Ok(ReplayAgent { trace, cursor: 0 })
    }

    /// Parses whitespace/comma separated action names or indices.
    pub fn parse_trace(text: &str) -> Result<Vec<Action>, AgentError> {
        text.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(i) => Action::from_index(i).ok_or_else(|| AgentError(format!("no action with index {i}"))),
                Err(_) => t.parse().map_err(|e: crate::Error| AgentError(e.to_string())),
            })
            .collect()
    }

    pub fn next_action(&mut self) -> Action {
        let a = self.trace.get(self.cursor).copied().unwrap_or(Action::Noop);
        self.cursor = self.cursor.saturating_add(1);
        a
    }
}

impl<T: Scalar> Agent<T> for ReplayAgent {
    fn act(&mut self, _observation: &Observation<T>) -> Result<Action, AgentError> {
        Ok(self.next_action())
    }

    fn reset(&mut self) {
        self.cursor = 0;
    }
}

/// Names accepted by [`make_agent`].
pub const AGENT_NAMES: [&str; 3] = ["random", "tracker", "replay"];

/// Builds a baseline agent from its name and string parameters.
///
/// * `random`: no parameters.
/// * `tracker`: `aim_jitter` (units, default 0).
/// * `replay`: `trace` (action list, see [`ReplayAgent::parse_trace`]).
pub fn make_agent<T: Scalar>(
    name: &str,
    params: &BTreeMap<String, String>,
    config: &GameConfig<T>,
    frame_skip: u32,
    seed: u64,
) -> Result<Box<dyn Agent<T>>, AgentError> {
    let known: &[&str] = match name {
        "random" => &[],
        "tracker" => &["aim_jitter"],
        "replay" => &["trace"],
        other => {
            return Err(AgentError(format!(
                "unknown agent {other:?} (expected one of {})",
                AGENT_NAMES.join(", ")
            )))
        }
    };
    if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(AgentError(format!("agent {name:?} has no parameter {k:?}")));
    }
    Ok(match name {
        "random" => Box::new(RandomAgent::new(seed)),
        "tracker" => {
            let jitter = match params.get("aim_jitter") {
                Some(v) => v.parse::<f64>().map_err(|e| AgentError(format!("aim_jitter: {e}")))?,
                None => 0.0,
            };
            Box::new(TrackerAgent::new(config, frame_skip).with_aim_jitter(T::lit(jitter), seed))
        }
        _ => {
            let text = params
                .get("trace")
                .ok_or_else(|| AgentError("replay agent needs a `trace` parameter".into()))?;
            Box::new(ReplayAgent::new(ReplayAgent::parse_trace(text)?)?)
        }
    })
}

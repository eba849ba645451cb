//! Episode-level environment: reset/step, frame skip, reward truncation.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::GameConfig;
use crate::error::{Error, Result};
use crate::game::{new_game, step_frame, Action, Event, GameState, Lifecycle, StepOutcome, Vec2};
use crate::intervention::{export_state, import_state, query, Selector, StateDocument, Value};
use crate::render::{render_frame, Frame};
use crate::rng::RngState;
use crate::scalar::Scalar;

/// When an episode ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpisodePolicy {
    /// Until GameOver or GameWon.
    #[default]
    FullGame,
    /// At the first lost life or the first cleared level.
    SingleLifeSingleLevel,
}

impl EpisodePolicy {
    fn ends(self, outcome: &StepOutcome) -> bool {
        match self {
            EpisodePolicy::FullGame => outcome.lifecycle.is_terminal(),
            EpisodePolicy::SingleLifeSingleLevel => {
                outcome.lifecycle != Lifecycle::Playing
                    || outcome
                        .events
                        .iter()
                        .any(|e| matches!(e, Event::LifeLost | Event::LevelCleared))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvParams {
    /// Frames each action is held for.
    pub frame_skip: u32,
    pub truncate_rewards: bool,
    pub episode_policy: EpisodePolicy,
    /// Replaces the serve RNG on reset (the config's `rng_seed` or the
    /// injected document's generator state otherwise).
    pub seed: Option<u64>,
    /// Skip rasterization; observations then carry only the state view.
    pub render: bool,
}

impl Default for EnvParams {
    fn default() -> Self {
        EnvParams {
            frame_skip: 4,
            truncate_rewards: true,
            episode_policy: EpisodePolicy::FullGame,
            seed: None,
            render: true,
        }
    }
}

/// Read-only structured snapshot handed to agents.
#[derive(Debug, Clone, PartialEq)]
pub struct StateView<T> {
    state: GameState<T>,
    config: Arc<GameConfig<T>>,
}

impl<T: Scalar> StateView<T> {
    pub fn query(&self, selector: Selector) -> Result<Value> {
        query(&self.state, &self.config, selector)
    }

    pub fn state(&self) -> &GameState<T> {
        &self.state
    }

    pub fn config(&self) -> &GameConfig<T> {
        &self.config
    }

    pub fn score(&self) -> u64 {
        self.state.score
    }

    pub fn lives(&self) -> u32 {
        self.state.lives_remaining
    }

    pub fn ball_in_play(&self) -> bool {
        self.state.ball_in_play
    }

    pub fn ball_pos(&self) -> Vec2<T> {
        self.state.ball_pos
    }

    pub fn ball_vel(&self) -> Vec2<T> {
        self.state.ball_vel
    }

    pub fn paddle_x(&self) -> T {
        self.state.paddle_x
    }

    pub fn live_brick_count(&self) -> usize {
        self.state.live_brick_count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observation<T> {
    /// `None` when the env was built with `render: false`.
    pub frame: Option<Frame>,
    pub state_view: StateView<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TimedEvent {
    pub frame: u64,
    pub event: Event,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepInfo {
    pub score: u64,
    pub lives: u32,
    pub frame: u64,
    pub events: Vec<TimedEvent>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepReturn<T> {
    pub observation: Observation<T>,
    /// Sign of the score change when truncating, the raw change otherwise.
    pub reward: i64,
    pub done: bool,
    pub info: StepInfo,
}

/// The minimal action set, in index order.
pub fn legal_actions() -> [Action; 4] {
    Action::ALL
}

pub struct Env<T> {
    config: Arc<GameConfig<T>>,
    params: EnvParams,
    start: Option<StateDocument>,
    state: GameState<T>,
    done: bool,
}

impl<T: Scalar> Env<T> {
    pub fn new(config: GameConfig<T>, params: EnvParams) -> Result<Self> {
        Self::build(config, None, params)
    }

    /// Env whose every reset restores the intervened state in `doc`.
    pub fn from_document(doc: &StateDocument, params: EnvParams) -> Result<Self> {
        let (_, config) = import_state::<T>(doc)?;
        Self::build(config, Some(doc.clone()), params)
    }

    fn build(config: GameConfig<T>, start: Option<StateDocument>, params: EnvParams) -> Result<Self> {
        if params.frame_skip == 0 {
            return Err(Error::InvalidArgument {
                arg: "frame_skip",
                reason: "must be at least 1".into(),
            });
        }
        let state = new_game(&config)?;
        let mut env = Env {
            config: Arc::new(config),
            params,
            start,
            state,
            done: true,
        };
        env.restart()?;
        Ok(env)
    }

    fn restart(&mut self) -> Result<()> {
        self.state = match &self.start {
            Some(doc) => import_state::<T>(doc)?.0,
            None => new_game(&self.config)?,
        };
        if let Some(seed) = self.params.seed {
            self.state.rng_state = RngState::seeded(seed);
        }
        self.done = self.state.lifecycle.is_terminal();
        Ok(())
    }

    pub fn reset(&mut self) -> Result<Observation<T>> {
        self.restart()?;
        Ok(self.observe())
    }

    /// Holds `action` for `frame_skip` frames, stopping early if the episode ends.
    pub fn step(&mut self, action: Action) -> Result<StepReturn<T>> {
        let mut delta = 0u64;
        let mut events = Vec::new();
        for _ in 0..self.params.frame_skip {
            let out = self.step_frame(action)?;
            delta += out.score_delta;
            let frame = self.state.frame;
            events.extend(out.events.into_iter().map(|event| TimedEvent { frame, event }));
            if self.done {
                break;
            }
        }
        let reward = i64::try_from(delta).unwrap_or(i64::MAX);
        Ok(StepReturn {
            observation: self.observe(),
            reward: if self.params.truncate_rewards {
                reward.signum()
            } else {
                reward
            },
            done: self.done,
            info: StepInfo {
                score: self.state.score,
                lives: self.state.lives_remaining,
                frame: self.state.frame,
                events,
            },
        })
    }

    /// One simulator frame without rendering.
    pub fn step_frame(&mut self, action: Action) -> Result<StepOutcome> {
        if self.done {
            return Err(Error::EpisodeDone);
        }
        let out = step_frame(&mut self.state, &self.config, action)?;
        self.done = self.params.episode_policy.ends(&out);
        Ok(out)
    }

    pub fn observe(&self) -> Observation<T> {
        Observation {
            frame: self.params.render.then(|| render_frame(&self.state, &self.config)),
            state_view: StateView {
                state: self.state.clone(),
                config: Arc::clone(&self.config),
            },
        }
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    pub fn state(&self) -> &GameState<T> {
        &self.state
    }

    pub fn config(&self) -> &GameConfig<T> {
        &self.config
    }

    pub fn params(&self) -> &EnvParams {
        &self.params
    }

    pub fn export(&self) -> StateDocument {
        export_state(&self.state, &self.config)
    }
}

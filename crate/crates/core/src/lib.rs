//! Deterministic, fully parameterized Breakout.
//!
//! * [`game`]: frame-by-frame simulation driven by a [`GameConfig`].
//! * [`intervention`]: export any state to a canonical [`StateDocument`],
//!   edit it, and resume play from the edited state.
//! * [`env`]: Gym-style reset/step surface with frame skip, reward
//!   truncation and 210x160 RGB rendering.
//! * [`agents`]: the agent contract and scripted baselines.
//!
//! Real-valued quantities are generic over [`Scalar`] (`f32` or `f64`). The
//! unsuffixed aliases below pick `f64`.

pub mod agents;
pub mod config;
pub mod env;
mod error;
pub mod game;
pub mod intervention;
pub mod physics;
pub mod render;
mod rng;
pub mod scalar;

pub use agents::{make_agent, Agent, AgentError, RandomAgent, ReplayAgent, TrackerAgent};
pub use config::{brick_value, level_total_score, GameConfig, Palette, Rgb, SpeedStep};
pub use env::{legal_actions, EnvParams, EpisodePolicy, Observation, StateView, StepInfo, StepReturn, TimedEvent};
pub use error::{Error, Result};
pub use game::{new_game, step_frame, Action, Event, GameState, Lifecycle, StepOutcome, Vec2};
pub use intervention::{export_state, import_state, query, Selector, StateDocument, Value};
pub use physics::paddle_bounce_angle;
pub use render::{render_frame, Frame, FRAME_CHANNELS, FRAME_HEIGHT, FRAME_WIDTH};
pub use rng::RngState;
pub use scalar::Scalar;

pub type Config = GameConfig<f64>;
pub type State = GameState<f64>;
pub type Env = env::Env<f64>;
pub type Tracker = TrackerAgent<f64>;

pub type Config32 = GameConfig<f32>;
pub type State32 = GameState<f32>;
pub type Env32 = env::Env<f32>;
pub type Tracker32 = TrackerAgent<f32>;

//! Canonical JSON form of a game state and its config.

use serde::{Deserialize, Serialize};

use crate::config::{GameConfig, Palette, SpeedStep};
use crate::error::{Error, Result};
use crate::game::{GameState, Lifecycle, Vec2};
use crate::rng::RngState;
use crate::scalar::{format_decimal, parse_decimal, Scalar};

pub const SCHEMA_VERSION: &str = "toybox-breakout/1";

/// Exported game state: everything needed to resume play exactly.
///
/// Reals are fixed 9-digit decimal strings, bricks a row-major boolean
/// array, and the serve RNG a hex byte string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub schema_version: String,
    pub config: ConfigRecord,
    pub state: StateRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeedStepRecord {
    pub hits: u32,
    pub multiplier: String,
}

/// Wire form of [`GameConfig`]. Missing fields take their defaults, so a
/// config file only needs the knobs it changes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigRecord {
    pub grid_cols: u32,
    pub grid_rows: u32,
    pub row_points: Vec<u32>,
    pub field_width: u32,
    pub field_height: u32,
    pub wall_width: u32,
    pub ceiling_y: u32,
    pub brick_top_y: u32,
    pub brick_height: u32,
    pub paddle_width: u32,
    pub paddle_height: u32,
    pub paddle_y: u32,
    pub paddle_speed: u32,
    pub ball_size: u32,
    pub ball_speed: String,
    pub speedup_schedule: Vec<SpeedStepRecord>,
    pub default_launch_angle_deg: String,
    pub lives: u32,
    pub levels_to_win: u32,
    pub frames_per_second: u32,
    pub rng_seed: u64,
    pub shrink_paddle_on_ceiling: bool,
    pub palette: Palette,
}

impl Default for ConfigRecord {
    fn default() -> Self {
        ConfigRecord::from_config(&GameConfig::<f64>::default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateRecord {
    pub frame: u64,
    pub score: u64,
    pub lives_remaining: u32,
    pub level: u32,
    pub bricks_alive: Vec<bool>,
    pub ball_pos: [String; 2],
    pub ball_vel: [String; 2],
    pub ball_in_play: bool,
    pub paddle_x: String,
    pub ball_hit_count: u32,
    pub rng_state: String,
    pub lifecycle: Lifecycle,
    pub paddle_shrunk: bool,
}

fn real<T: Scalar>(path: &str, s: &str) -> Result<T> {
    parse_decimal(s).ok_or_else(|| Error::document(path, format!("{s:?} is not a finite decimal")))
}

impl ConfigRecord {
    pub fn from_config<T: Scalar>(c: &GameConfig<T>) -> Self {
        ConfigRecord {
            grid_cols: c.grid_cols,
            grid_rows: c.grid_rows,
            row_points: c.row_points.clone(),
            field_width: c.field_width,
            field_height: c.field_height,
            wall_width: c.wall_width,
            ceiling_y: c.ceiling_y,
            brick_top_y: c.brick_top_y,
            brick_height: c.brick_height,
            paddle_width: c.paddle_width,
            paddle_height: c.paddle_height,
            paddle_y: c.paddle_y,
            paddle_speed: c.paddle_speed,
            ball_size: c.ball_size,
            ball_speed: format_decimal(c.ball_speed),
            speedup_schedule: c
                .speedup_schedule
                .iter()
                .map(|s| SpeedStepRecord {
                    hits: s.hits,
                    multiplier: format_decimal(s.multiplier),
                })
                .collect(),
            default_launch_angle_deg: format_decimal(c.default_launch_angle_deg),
            lives: c.lives,
            levels_to_win: c.levels_to_win,
            frames_per_second: c.frames_per_second,
            rng_seed: c.rng_seed,
            shrink_paddle_on_ceiling: c.shrink_paddle_on_ceiling,
            palette: c.palette.clone(),
        }
    }

    /// Decodes and validates. Errors carry a `config.<field>` path.
    pub fn to_config<T: Scalar>(&self) -> Result<GameConfig<T>> {
        let speedup_schedule = self
            .speedup_schedule
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Ok(SpeedStep {
                    hits: s.hits,
                    multiplier: real(&format!("config.speedup_schedule[{i}].multiplier"), &s.multiplier)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let config = GameConfig {
            grid_cols: self.grid_cols,
            grid_rows: self.grid_rows,
            row_points: self.row_points.clone(),
            field_width: self.field_width,
            field_height: self.field_height,
            wall_width: self.wall_width,
            ceiling_y: self.ceiling_y,
            brick_top_y: self.brick_top_y,
            brick_height: self.brick_height,
            paddle_width: self.paddle_width,
            paddle_height: self.paddle_height,
            paddle_y: self.paddle_y,
            paddle_speed: self.paddle_speed,
            ball_size: self.ball_size,
            ball_speed: real("config.ball_speed", &self.ball_speed)?,
            speedup_schedule,
            default_launch_angle_deg: real("config.default_launch_angle_deg", &self.default_launch_angle_deg)?,
            lives: self.lives,
            levels_to_win: self.levels_to_win,
            frames_per_second: self.frames_per_second,
            rng_seed: self.rng_seed,
            shrink_paddle_on_ceiling: self.shrink_paddle_on_ceiling,
            palette: self.palette.clone(),
        };
        config.validate().map_err(|e| match e {
            Error::Config { field, reason } => Error::Document {
                path: format!("config.{field}"),
                reason,
            },
            other => other,
        })?;
        Ok(config)
    }
}

/// Parses a standalone config file (same shape as a document's `config`).
pub fn config_from_json<T: Scalar>(json: &str) -> Result<GameConfig<T>> {
    serde_json::from_str::<ConfigRecord>(json)?.to_config()
}

pub fn config_to_json<T: Scalar>(config: &GameConfig<T>) -> String {
    let mut out = serde_json::to_string_pretty(&ConfigRecord::from_config(config)).expect("config serializes");
    out.push('\n');
    out
}

impl StateDocument {
    pub fn from_json(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    /// Canonical text: pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }

    pub fn live_brick_count(&self) -> usize {
        self.state.bricks_alive.iter().filter(|&&b| b).count()
    }
}

/// Captures `state` under `config` losslessly.
pub fn export_state<T: Scalar>(state: &GameState<T>, config: &GameConfig<T>) -> StateDocument {
    StateDocument {
        schema_version: SCHEMA_VERSION.to_owned(),
        config: ConfigRecord::from_config(config),
        state: StateRecord {
            frame: state.frame,
            score: state.score,
            lives_remaining: state.lives_remaining,
            level: state.level,
            bricks_alive: state.bricks_alive.clone(),
            ball_pos: [format_decimal(state.ball_pos.x), format_decimal(state.ball_pos.y)],
            ball_vel: [format_decimal(state.ball_vel.x), format_decimal(state.ball_vel.y)],
            ball_in_play: state.ball_in_play,
            paddle_x: format_decimal(state.paddle_x),
            ball_hit_count: state.ball_hit_count,
            rng_state: hex::encode(state.rng_state.to_bytes()),
            lifecycle: state.lifecycle,
            paddle_shrunk: state.paddle_shrunk,
        },
    }
}

/// Rebuilds a state and its config, rejecting anything physically inconsistent.
pub fn import_state<T: Scalar>(doc: &StateDocument) -> Result<(GameState<T>, GameConfig<T>)> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema {
            found: doc.schema_version.clone(),
            expected: SCHEMA_VERSION,
        });
    }
    let config = doc.config.to_config::<T>()?;
    let r = &doc.state;
    let rng_bytes = hex::decode(&r.rng_state).map_err(|e| Error::document("state.rng_state", e.to_string()))?;
    let rng_state = RngState::from_bytes(&rng_bytes)
        .ok_or_else(|| Error::document("state.rng_state", "wrong length for generator state"))?;
    let state = GameState {
        frame: r.frame,
        score: r.score,
        lives_remaining: r.lives_remaining,
        level: r.level,
        bricks_alive: r.bricks_alive.clone(),
        ball_pos: Vec2::new(
            real("state.ball_pos[0]", &r.ball_pos[0])?,
            real("state.ball_pos[1]", &r.ball_pos[1])?,
        ),
        ball_vel: Vec2::new(
            real("state.ball_vel[0]", &r.ball_vel[0])?,
            real("state.ball_vel[1]", &r.ball_vel[1])?,
        ),
        ball_in_play: r.ball_in_play,
        paddle_x: real("state.paddle_x", &r.paddle_x)?,
        ball_hit_count: r.ball_hit_count,
        rng_state,
        lifecycle: r.lifecycle,
        paddle_shrunk: r.paddle_shrunk,
    };
    validate_state(&state, &config)?;
    Ok((state, config))
}

fn check(cond: bool, path: &str, reason: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::document(path, reason()))
    }
}

/// Checks the physical invariants a state must satisfy under `config`.
pub fn validate_state<T: Scalar>(state: &GameState<T>, config: &GameConfig<T>) -> Result<()> {
    check(
        state.bricks_alive.len() == config.brick_count(),
        "state.bricks_alive",
        || {
            format!(
                "has {} cells, grid is {}x{}",
                state.bricks_alive.len(),
                config.grid_rows,
                config.grid_cols
            )
        },
    )?;
    check(state.lives_remaining <= config.lives, "state.lives_remaining", || {
        format!("{} exceeds config.lives {}", state.lives_remaining, config.lives)
    })?;
    check((1..=config.levels_to_win).contains(&state.level), "state.level", || {
        format!("{} outside 1..={}", state.level, config.levels_to_win)
    })?;

    let live = state.bricks_alive.iter().filter(|&&b| b).count();
    let lifecycle = state.lifecycle;
    match lifecycle {
        Lifecycle::Playing | Lifecycle::LifeLost => {
            check(live > 0, "state.bricks_alive", || {
                format!("no live bricks while {lifecycle:?}; the level should have cleared")
            })?;
            check(state.lives_remaining > 0, "state.lives_remaining", || {
                format!("no lives left while {lifecycle:?}")
            })?;
        }
        Lifecycle::LevelCleared | Lifecycle::GameWon => {
            check(live == 0, "state.bricks_alive", || {
                format!("{live} live bricks while {lifecycle:?}")
            })?;
            let last = lifecycle == Lifecycle::GameWon;
            check((state.level == config.levels_to_win) == last, "state.level", || {
                format!("level {} inconsistent with {lifecycle:?}", state.level)
            })?;
        }
        Lifecycle::GameOver => {
            check(state.lives_remaining == 0, "state.lives_remaining", || {
                "GameOver with lives remaining".into()
            })?;
        }
    }

    let h = config.ball_half();
    let (x_lo, x_hi) = (config.inner_left() + h, config.inner_right() - h);
    let (y_lo, y_hi) = (T::units(config.ceiling_y) + h, T::units(config.field_height) - h);
    let p = state.ball_pos;
    check(p.x >= x_lo && p.x <= x_hi, "state.ball_pos[0]", || {
        format!("{} outside [{x_lo}, {x_hi}]", p.x)
    })?;
    check(p.y >= y_lo && p.y <= y_hi, "state.ball_pos[1]", || {
        format!("{} outside [{y_lo}, {y_hi}]", p.y)
    })?;

    if state.ball_in_play {
        check(lifecycle == Lifecycle::Playing, "state.ball_in_play", || {
            format!("ball cannot be in play while {lifecycle:?}")
        })?;
        let expected = config.speed_at(state.ball_hit_count);
        let speed = state.ball_vel.norm();
        check(speeds_match(speed, expected), "state.ball_vel", || {
            format!(
                "speed {speed} inconsistent with config speed {expected} after {} contacts",
                state.ball_hit_count
            )
        })?;
    } else {
        check(
            state.ball_vel.x == T::zero() && state.ball_vel.y == T::zero(),
            "state.ball_vel",
            || "ball out of play must be at rest".into(),
        )?;
    }

    check(
        !state.paddle_shrunk || config.shrink_paddle_on_ceiling,
        "state.paddle_shrunk",
        || "paddle shrinking is disabled in config".into(),
    )?;
    let (lo, hi) = config.paddle_x_range(state.paddle_width(config));
    check(state.paddle_x >= lo && state.paddle_x <= hi, "state.paddle_x", || {
        format!("{} outside [{lo}, {hi}]", state.paddle_x)
    })?;
    Ok(())
}

pub(crate) fn speeds_match<T: Scalar>(a: T, b: T) -> bool {
    let tol = (T::epsilon() * T::lit(16.0)).max(T::lit(1e-8));
    (a - b).abs() <= tol * b.abs().max(T::one())
}

//! Export, inspect, and alter game state, then resume play from it.
//!
//! Mutators touch only the fields they name. They do not re-validate the
//! whole state (a sequence of edits may pass through inconsistent
//! intermediate states); [`import_state`] and [`validate_state`] are the
//! checked boundary.

mod document;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use document::{
    config_from_json, config_to_json, export_state, import_state, validate_state, ConfigRecord, SpeedStepRecord,
    StateDocument, StateRecord, SCHEMA_VERSION,
};

use crate::config::GameConfig;
use crate::error::{Error, Result};
use crate::game::{brick_index, GameState, Lifecycle, Vec2};
use crate::physics::direction;
use crate::scalar::Scalar;

pub fn set_brick<T: Scalar>(
    state: &mut GameState<T>,
    config: &GameConfig<T>,
    row: usize,
    col: usize,
    alive: bool,
) -> Result<()> {
    let i = brick_index(config, row, col)?;
    require_playing(state)?;
    state.bricks_alive[i] = alive;
    Ok(())
}

/// Puts the ball in play at `pos` heading `angle_deg` counterclockwise from
/// rightward (90° is straight up).
///
/// `speed` must be the speed the config prescribes for the state's current
/// contact count; a state moving at any other speed would not import.
pub fn set_ball<T: Scalar>(
    state: &mut GameState<T>,
    config: &GameConfig<T>,
    pos: Vec2<T>,
    angle_deg: T,
    speed: T,
) -> Result<()> {
    require_playing(state)?;
    let h = config.ball_half();
    let inside_x = pos.x >= config.inner_left() + h && pos.x <= config.inner_right() - h;
    let inside_y = pos.y >= T::units(config.ceiling_y) + h && pos.y <= T::units(config.field_height) - h;
    if !(inside_x && inside_y) {
        return Err(Error::InvalidArgument {
            arg: "pos",
            reason: format!("({}, {}) is outside the playfield", pos.x, pos.y),
        });
    }
    if !angle_deg.is_finite() {
        return Err(Error::InvalidArgument {
            arg: "angle_deg",
            reason: "must be finite".into(),
        });
    }
    if !(speed.is_finite() && speed > T::zero()) {
        return Err(Error::InvalidArgument {
            arg: "speed",
            reason: format!("{speed} is not positive"),
        });
    }
    let expected = config.speed_at(state.ball_hit_count);
    if !document::speeds_match(speed, expected) {
        return Err(Error::InvalidArgument {
            arg: "speed",
            reason: format!("{speed} differs from the configured speed {expected}"),
        });
    }
    let (dx, dy) = direction(angle_deg);
    state.ball_pos = Vec2::new(pos.x.quantize(), pos.y.quantize());
    state.ball_vel = Vec2::new((dx * speed).quantize(), (dy * speed).quantize());
    state.ball_in_play = true;
    Ok(())
}

/// Takes the ball out of play, parked above the paddle awaiting a serve.
pub fn park_ball<T: Scalar>(state: &mut GameState<T>, config: &GameConfig<T>) {
    state.park_ball(config);
}

pub fn set_paddle<T: Scalar>(state: &mut GameState<T>, config: &GameConfig<T>, x: T) -> Result<()> {
    let (lo, hi) = config.paddle_x_range(state.paddle_width(config));
    if !(x >= lo && x <= hi) {
        return Err(Error::InvalidArgument {
            arg: "x",
            reason: format!("{x} outside [{lo}, {hi}]"),
        });
    }
    state.paddle_x = x.quantize();
    Ok(())
}

pub fn set_lives<T: Scalar>(state: &mut GameState<T>, config: &GameConfig<T>, lives: u32) -> Result<()> {
    if lives == 0 || lives > config.lives {
        return Err(Error::InvalidArgument {
            arg: "lives",
            reason: format!("{lives} outside 1..={}", config.lives),
        });
    }
    state.lives_remaining = lives;
    Ok(())
}

pub fn set_score<T: Scalar>(state: &mut GameState<T>, score: u64) {
    state.score = score;
}

fn require_playing<T: Scalar>(state: &GameState<T>) -> Result<()> {
    match state.lifecycle {
        Lifecycle::Playing => Ok(()),
        other => Err(Error::NotPlaying(other)),
    }
}

/// Named read-only views onto a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Selector {
    Score,
    Lives,
    Level,
    Frame,
    BallPos,
    BallVel,
    BallInPlay,
    PaddleX,
    BricksAlive,
    Brick(usize, usize),
    LiveBrickCount,
    Lifecycle,
}

impl Selector {
    pub const NAMES: [&'static str; 12] = [
        "score",
        "lives",
        "level",
        "frame",
        "ball_pos",
        "ball_vel",
        "ball_in_play",
        "paddle_x",
        "bricks_alive",
        "brick(<row>,<col>)",
        "live_brick_count",
        "lifecycle",
    ];
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let simple = match t {
            "score" => Some(Selector::Score),
            "lives" => Some(Selector::Lives),
            "level" => Some(Selector::Level),
            "frame" => Some(Selector::Frame),
            "ball_pos" => Some(Selector::BallPos),
            "ball_vel" => Some(Selector::BallVel),
            "ball_in_play" => Some(Selector::BallInPlay),
            "paddle_x" => Some(Selector::PaddleX),
            "bricks_alive" => Some(Selector::BricksAlive),
            "live_brick_count" => Some(Selector::LiveBrickCount),
            "lifecycle" => Some(Selector::Lifecycle),
            _ => None,
        };
        if let Some(sel) = simple {
            return Ok(sel);
        }
        let unknown = || Error::UnknownSelector(s.to_owned());
        let args = t
            .strip_prefix("brick(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(unknown)?;
        let (row, col) = args.split_once(',').ok_or_else(unknown)?;
        let row = row.trim().parse().map_err(|_| unknown())?;
        let col = col.trim().parse().map_err(|_| unknown())?;
        Ok(Selector::Brick(row, col))
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Score => f.write_str("score"),
            Selector::Lives => f.write_str("lives"),
            Selector::Level => f.write_str("level"),
            Selector::Frame => f.write_str("frame"),
            Selector::BallPos => f.write_str("ball_pos"),
            Selector::BallVel => f.write_str("ball_vel"),
            Selector::BallInPlay => f.write_str("ball_in_play"),
            Selector::PaddleX => f.write_str("paddle_x"),
            Selector::BricksAlive => f.write_str("bricks_alive"),
            Selector::Brick(r, c) => write!(f, "brick({r},{c})"),
            Selector::LiveBrickCount => f.write_str("live_brick_count"),
            Selector::Lifecycle => f.write_str("lifecycle"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Count(u64),
    Real(f64),
    Point([f64; 2]),
    Flag(bool),
    Grid(Vec<bool>),
    Lifecycle(Lifecycle),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Count(n) => write!(f, "{n}"),
            Value::Real(v) => write!(f, "{v}"),
            Value::Point([x, y]) => write!(f, "({x}, {y})"),
            Value::Flag(b) => write!(f, "{b}"),
            Value::Grid(cells) => {
                let s: String = cells.iter().map(|&b| if b { '1' } else { '0' }).collect();
                f.write_str(&s)
            }
            Value::Lifecycle(l) => write!(f, "{l:?}"),
        }
    }
}

pub fn query<T: Scalar>(state: &GameState<T>, config: &GameConfig<T>, selector: Selector) -> Result<Value> {
    let point = |v: Vec2<T>| Value::Point([v.x.as_f64(), v.y.as_f64()]);
    Ok(match selector {
        Selector::Score => Value::Count(state.score),
        Selector::Lives => Value::Count(state.lives_remaining.into()),
        Selector::Level => Value::Count(state.level.into()),
        Selector::Frame => Value::Count(state.frame),
        Selector::BallPos => point(state.ball_pos),
        Selector::BallVel => point(state.ball_vel),
        Selector::BallInPlay => Value::Flag(state.ball_in_play),
        Selector::PaddleX => Value::Real(state.paddle_x.as_f64()),
        Selector::BricksAlive => Value::Grid(state.bricks_alive.clone()),
        Selector::Brick(r, c) => Value::Flag(state.brick(config, r, c)?),
        Selector::LiveBrickCount => Value::Count(state.live_brick_count() as u64),
        Selector::Lifecycle => Value::Lifecycle(state.lifecycle),
    })
}

/// String-selector form of [`query`], as used by the CLI and bindings.
pub fn query_str<T: Scalar>(state: &GameState<T>, config: &GameConfig<T>, selector: &str) -> Result<Value> {
    query(state, config, selector.parse()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{new_game, step_frame, Action, Event};

    type Config = GameConfig<f64>;

    fn fresh() -> (GameState<f64>, Config) {
        let c = Config::default();
        (new_game(&c).unwrap(), c)
    }

    #[test]
    fn fresh_export_has_full_wall() {
        let (s, c) = fresh();
        let doc = export_state(&s, &c);
        assert_eq!(doc.state.bricks_alive.len(), 108);
        assert!(doc.state.bricks_alive.iter().all(|&b| b));
        assert_eq!(doc.schema_version, "toybox-breakout/1");
        assert_eq!(doc.to_json(), export_state(&s, &c).to_json());
    }

    #[test]
    fn identical_configs_export_identically() {
        let c = Config::default();
        let a = export_state(&new_game(&c).unwrap(), &c).to_json();
        let b = export_state(&new_game(&c).unwrap(), &c).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn round_trip_is_identity() {
        let (mut s, c) = fresh();
        step_frame(&mut s, &c, Action::Fire).unwrap();
        for i in 0..300 {
            let a = [Action::Left, Action::Right, Action::Noop][i % 3];
            step_frame(&mut s, &c, a).unwrap();
        }
        let doc = export_state(&s, &c);
        let (back, back_config) = import_state::<f64>(&doc).unwrap();
        assert_eq!(back, s);
        assert_eq!(back_config, c);
        let reparsed = StateDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(reparsed, doc);
    }

    #[test]
    fn all_dead_while_playing_is_rejected() {
        let (s, c) = fresh();
        let mut doc = export_state(&s, &c);
        doc.state.bricks_alive.fill(false);
        match import_state::<f64>(&doc) {
            Err(Error::Document { path, .. }) => assert_eq!(path, "state.bricks_alive"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn schema_mismatch_is_rejected() {
        let (s, c) = fresh();
        let mut doc = export_state(&s, &c);
        doc.schema_version = "toybox-breakout/0".into();
        assert!(matches!(import_state::<f64>(&doc), Err(Error::Schema { .. })));
    }

    #[test]
    fn inconsistent_speed_is_rejected() {
        let (mut s, c) = fresh();
        set_ball(&mut s, &c, Vec2::new(80.0, 150.0), 90.0, 2.0).unwrap();
        let mut doc = export_state(&s, &c);
        doc.state.ball_vel = ["0.000000000".into(), "-3.000000000".into()];
        match import_state::<f64>(&doc) {
            Err(Error::Document { path, .. }) => assert_eq!(path, "state.ball_vel"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn bad_config_reports_path() {
        let (s, c) = fresh();
        let mut doc = export_state(&s, &c);
        doc.config.row_points.pop();
        match import_state::<f64>(&doc) {
            Err(Error::Document { path, .. }) => assert_eq!(path, "config.row_points"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let (s, c) = fresh();
        let json = export_state(&s, &c).to_json().replacen("\"frame\"", "\"frames\"", 1);
        assert!(matches!(StateDocument::from_json(&json), Err(Error::Json(_))));
    }

    #[test]
    fn hand_written_single_brick_document() {
        let (s, c) = fresh();
        let mut doc = export_state(&s, &c);
        doc.state.bricks_alive.fill(false);
        doc.state.bricks_alive[2 * 18 + 9] = true;
        doc.state.ball_in_play = true;
        doc.state.ball_pos = ["84.0".into(), "120".into()];
        doc.state.ball_vel = ["0".into(), "-2".into()];
        let (mut s, c) = import_state::<f64>(&doc).unwrap();
        assert_eq!(s.live_brick_count(), 1);
        let mut events = vec![];
        for _ in 0..100 {
            events.extend(step_frame(&mut s, &c, Action::Noop).unwrap().events);
            if s.lifecycle != Lifecycle::Playing {
                break;
            }
        }
        assert_eq!(events, vec![Event::BrickHit { row: 2, col: 9 }, Event::LevelCleared]);
        assert_eq!(s.score, 4);
    }

    #[test]
    fn set_brick_is_minimal() {
        let (mut s, c) = fresh();
        let before = s.clone();
        set_brick(&mut s, &c, 3, 7, false).unwrap();
        assert_eq!(s.live_brick_count(), 107);
        assert_eq!(s.score, before.score);
        let mut expect = before.clone();
        expect.bricks_alive[3 * 18 + 7] = false;
        assert_eq!(s, expect);

        let snapshot = s.clone();
        set_brick(&mut s, &c, 3, 7, false).unwrap();
        assert_eq!(s, snapshot);

        assert!(matches!(
            set_brick(&mut s, &c, 6, 0, false),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            set_brick(&mut s, &c, 0, 18, false),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn isolate_one_brick() {
        let (mut s, c) = fresh();
        for r in 0..6 {
            for col in 0..18 {
                set_brick(&mut s, &c, r, col, (r, col) == (3, 7)).unwrap();
            }
        }
        assert_eq!(s.live_brick_count(), 1);
        assert!(s.brick(&c, 3, 7).unwrap());
    }

    #[test]
    fn set_ball_axis_cases() {
        let (mut s, c) = fresh();
        set_ball(&mut s, &c, Vec2::new(80.0, 150.0), 90.0, 2.0).unwrap();
        assert_eq!(s.ball_vel, Vec2::new(0.0, -2.0));
        assert!(s.ball_in_play);
        set_ball(&mut s, &c, Vec2::new(80.0, 150.0), 0.0, 2.0).unwrap();
        assert_eq!(s.ball_vel, Vec2::new(2.0, 0.0));
        set_ball(&mut s, &c, Vec2::new(80.0, 150.0), 270.0, 2.0).unwrap();
        assert_eq!(s.ball_vel, Vec2::new(0.0, 2.0));
    }

    #[test]
    fn set_ball_rejects_bad_arguments() {
        let (mut s, c) = fresh();
        let err = |r: Result<()>| match r {
            Err(Error::InvalidArgument { arg, .. }) => arg,
            other => panic!("expected invalid argument, got {other:?}"),
        };
        assert_eq!(err(set_ball(&mut s, &c, Vec2::new(2.0, 150.0), 90.0, 2.0)), "pos");
        assert_eq!(err(set_ball(&mut s, &c, Vec2::new(80.0, 300.0), 90.0, 2.0)), "pos");
        assert_eq!(err(set_ball(&mut s, &c, Vec2::new(80.0, 150.0), 90.0, 0.0)), "speed");
        assert_eq!(err(set_ball(&mut s, &c, Vec2::new(80.0, 150.0), 90.0, -2.0)), "speed");
        assert_eq!(err(set_ball(&mut s, &c, Vec2::new(80.0, 150.0), 90.0, 3.0)), "speed");
    }

    #[test]
    fn set_paddle_bounds() {
        let (mut s, c) = fresh();
        set_paddle(&mut s, &c, 80.0).unwrap();
        assert_eq!(s.paddle_x, 80.0);
        let before = s.clone();
        set_paddle(&mut s, &c, 20.0).unwrap();
        assert_eq!(s.paddle_x - 12.0, 8.0); // flush with the left wall
        let mut expect = before;
        expect.paddle_x = 20.0;
        assert_eq!(s, expect);
        assert!(set_paddle(&mut s, &c, 19.5).is_err());
        assert!(set_paddle(&mut s, &c, 140.5).is_err());
    }

    #[test]
    fn query_selectors() {
        let (s, c) = fresh();
        assert_eq!(query_str(&s, &c, "live_brick_count").unwrap(), Value::Count(108));
        assert_eq!(query_str(&s, &c, "score").unwrap(), Value::Count(0));
        assert_eq!(query_str(&s, &c, "brick(5, 17)").unwrap(), Value::Flag(true));
        assert_eq!(query_str(&s, &c, "paddle_x").unwrap(), Value::Real(80.0));
        assert!(matches!(query_str(&s, &c, "brick(6,0)"), Err(Error::OutOfRange { .. })));
        assert!(matches!(query_str(&s, &c, "velocity"), Err(Error::UnknownSelector(_))));
        assert!(matches!(query_str(&s, &c, "brick(1)"), Err(Error::UnknownSelector(_))));
        for name in ["score", "ball_pos", "brick(2,3)", "lifecycle"] {
            assert_eq!(name.parse::<Selector>().unwrap().to_string(), name);
        }
    }

    #[test]
    fn query_after_a_row_four_hit() {
        let (mut s, c) = fresh();
        // column 0 open below row 3, so the first brick met going up is (3, 0)
        for r in 4..6 {
            set_brick(&mut s, &c, r, 0, false).unwrap();
        }
        set_ball(&mut s, &c, Vec2::new(12.0, 150.0), 90.0, 2.0).unwrap();
        let before = s.score;
        loop {
            let out = step_frame(&mut s, &c, Action::Noop).unwrap();
            if out.events.contains(&Event::BrickHit { row: 3, col: 0 }) {
                break;
            }
        }
        assert_eq!(query(&s, &c, Selector::Score).unwrap(), Value::Count(before + 4));
    }

    #[test]
    fn config_json_accepts_partial_files() {
        let c: Config = config_from_json(r#"{"lives": 3, "ball_speed": "2.5"}"#).unwrap();
        assert_eq!(c.lives, 3);
        assert_eq!(c.ball_speed, 2.5);
        assert_eq!(c.grid_cols, 18);
        let back: Config = config_from_json(&config_to_json(&c)).unwrap();
        assert_eq!(back, c);
    }
}

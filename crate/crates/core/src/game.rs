//! Frame-by-frame Breakout simulation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{brick_value, GameConfig};
use crate::error::{Error, Result};
use crate::physics::{direction, paddle_bounce_angle, sweep_box, time_to_plane, Face};
use crate::rng::RngState;
use crate::scalar::Scalar;

/// Contacts resolved per frame before the remaining motion is dropped.
const MAX_CONTACTS_PER_FRAME: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Noop,
    Fire,
    Left,
    Right,
}

impl Action {
    pub const ALL: [Action; 4] = [Action::Noop, Action::Fire, Action::Left, Action::Right];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Action> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::Noop => "noop",
            Action::Fire => "fire",
            Action::Left => "left",
            Action::Right => "right",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Action {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Action::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownAction(s.to_owned()))
    }
}

/// Where the game is in its life/level cycle.
///
/// `LifeLost` and `LevelCleared` mark the frame on which that happened; the
/// next [`step_frame`] resumes play from them. `GameOver` and `GameWon` are
/// terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Lifecycle {
    Playing,
    LifeLost,
    LevelCleared,
    GameWon,
    GameOver,
}

impl Lifecycle {
    pub fn is_terminal(self) -> bool {
        matches!(self, Lifecycle::GameWon | Lifecycle::GameOver)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Event {
    BrickHit { row: usize, col: usize },
    PaddleHit,
    WallHit,
    CeilingHit,
    LifeLost,
    LevelCleared,
    GameWon,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    fn quantize(self) -> Self {
        Vec2::new(self.x.quantize(), self.y.quantize())
    }
}

/// Complete mutable world state. Together with its [`GameConfig`] it
/// determines every future frame.
#[derive(Debug, Clone, PartialEq)]
pub struct GameState<T> {
    pub frame: u64,
    pub score: u64,
    pub lives_remaining: u32,
    /// 1-based.
    pub level: u32,
    /// Row-major, `grid_rows * grid_cols` cells.
    pub bricks_alive: Vec<bool>,
    /// Ball center.
    pub ball_pos: Vec2<T>,
    pub ball_vel: Vec2<T>,
    pub ball_in_play: bool,
    /// Paddle center.
    pub paddle_x: T,
    /// Paddle and wall contacts since the current serve.
    pub ball_hit_count: u32,
    pub rng_state: RngState,
    pub lifecycle: Lifecycle,
    pub paddle_shrunk: bool,
}

/// What happened during one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub score_delta: u64,
    pub events: Vec<Event>,
    pub lifecycle: Lifecycle,
}

impl<T: Scalar> GameState<T> {
    pub fn live_brick_count(&self) -> usize {
        self.bricks_alive.iter().filter(|&&b| b).count()
    }

    pub fn brick(&self, config: &GameConfig<T>, row: usize, col: usize) -> Result<bool> {
        Ok(self.bricks_alive[brick_index(config, row, col)?])
    }

    pub fn paddle_width(&self, config: &GameConfig<T>) -> T {
        let w = T::units(config.paddle_width);
        if self.paddle_shrunk {
            w / T::lit(2.0)
        } else {
            w
        }
    }

    /// Puts the ball back above the paddle, waiting for a serve.
    pub(crate) fn park_ball(&mut self, config: &GameConfig<T>) {
        self.ball_in_play = false;
        self.ball_vel = Vec2::default();
        self.ball_hit_count = 0;
        self.ball_pos = Vec2::new(self.paddle_x, config.serve_y());
    }
}

pub(crate) fn brick_index<T: Scalar>(config: &GameConfig<T>, row: usize, col: usize) -> Result<usize> {
    let (rows, cols) = (config.grid_rows as usize, config.grid_cols as usize);
    if row >= rows {
        return Err(Error::OutOfRange {
            what: "brick row",
            index: row,
            limit: rows,
        });
    }
    if col >= cols {
        return Err(Error::OutOfRange {
            what: "brick column",
            index: col,
            limit: cols,
        });
    }
    Ok(row * cols + col)
}

/// Fresh game: full wall, ball parked above a centered paddle.
pub fn new_game<T: Scalar>(config: &GameConfig<T>) -> Result<GameState<T>> {
    config.validate()?;
    let mut state = GameState {
        frame: 0,
        score: 0,
        lives_remaining: config.lives,
        level: 1,
        bricks_alive: vec![true; config.brick_count()],
        ball_pos: Vec2::default(),
        ball_vel: Vec2::default(),
        ball_in_play: false,
        paddle_x: T::units(config.field_width) / T::lit(2.0),
        ball_hit_count: 0,
        rng_state: RngState::seeded(config.rng_seed),
        lifecycle: Lifecycle::Playing,
        paddle_shrunk: false,
    };
    state.park_ball(config);
    Ok(state)
}

/// Advances the game by exactly one frame under `action`.
pub fn step_frame<T: Scalar>(state: &mut GameState<T>, config: &GameConfig<T>, action: Action) -> Result<StepOutcome> {
    match state.lifecycle {
        Lifecycle::Playing => {}
        Lifecycle::LifeLost => state.lifecycle = Lifecycle::Playing,
        Lifecycle::LevelCleared => {
            state.level += 1;
            state.bricks_alive.fill(true);
            state.paddle_shrunk = false;
            state.lifecycle = Lifecycle::Playing;
        }
        terminal => return Err(Error::NotPlaying(terminal)),
    }
    state.frame += 1;

    let mut frame = Frame {
        state,
        config,
        events: Vec::new(),
        score_delta: 0,
    };
    frame.move_paddle(action);
    if frame.state.ball_in_play {
        frame.move_ball();
    } else if action == Action::Fire {
        frame.serve();
    }

    let Frame {
        state,
        events,
        score_delta,
        ..
    } = frame;
    state.ball_pos = state.ball_pos.quantize();
    state.ball_vel = state.ball_vel.quantize();
    state.paddle_x = state.paddle_x.quantize();
    Ok(StepOutcome {
        score_delta,
        events,
        lifecycle: state.lifecycle,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
enum Surface {
    // declaration order breaks exact time ties
    Brick { row: usize, col: usize },
    LeftWall,
    RightWall,
    Ceiling,
    Paddle,
    Floor,
}

struct Contact<T> {
    time: T,
    surface: Surface,
    face: Face,
}

struct Frame<'a, T> {
    state: &'a mut GameState<T>,
    config: &'a GameConfig<T>,
    events: Vec<Event>,
    score_delta: u64,
}

impl<T: Scalar> Frame<'_, T> {
    fn move_paddle(&mut self, action: Action) {
        let step = T::units(self.config.paddle_speed);
        let x = match action {
            Action::Left => self.state.paddle_x - step,
            Action::Right => self.state.paddle_x + step,
            Action::Noop | Action::Fire => return,
        };
        let (lo, hi) = self.config.paddle_x_range(self.state.paddle_width(self.config));
        self.state.paddle_x = x.max(lo).min(hi);
    }

    fn serve(&mut self) {
        let config = self.config;
        let state = &mut *self.state;
        let angle = if state.rng_state.coin() {
            config.default_launch_angle_deg
        } else {
            T::lit(180.0) - config.default_launch_angle_deg
        };
        let (dx, dy) = direction(angle);
        let speed = config.speed_at(0);
        state.ball_hit_count = 0;
        state.ball_pos = Vec2::new(state.paddle_x, config.serve_y());
        state.ball_vel = Vec2::new(dx * speed, dy * speed);
        state.ball_in_play = true;
    }

    fn move_ball(&mut self) {
        let mut remaining = T::one();
        for _ in 0..MAX_CONTACTS_PER_FRAME {
            let Some(contact) = self.earliest_contact(remaining) else {
                let s = &mut *self.state;
                s.ball_pos.x = s.ball_pos.x + s.ball_vel.x * remaining;
                s.ball_pos.y = s.ball_pos.y + s.ball_vel.y * remaining;
                break;
            };
            let s = &mut *self.state;
            s.ball_pos.x = s.ball_pos.x + s.ball_vel.x * contact.time;
            s.ball_pos.y = s.ball_pos.y + s.ball_vel.y * contact.time;
            remaining = remaining - contact.time;
            if !self.resolve(contact) {
                return;
            }
        }
        self.contain_ball();
    }

    fn contain_ball(&mut self) {
        let c = self.config;
        let h = c.ball_half();
        let p = &mut self.state.ball_pos;
        p.x = p.x.max(c.inner_left() + h).min(c.inner_right() - h);
        p.y = p.y.max(T::units(c.ceiling_y) + h).min(T::units(c.field_height) - h);
    }

    fn earliest_contact(&self, horizon: T) -> Option<Contact<T>> {
        let c = self.config;
        let s = &*self.state;
        let h = c.ball_half();
        let (p, v) = (s.ball_pos, s.ball_vel);
        let mut best: Option<Contact<T>> = None;
        let mut offer = |time: T, surface: Surface, face: Face| {
            let better = match &best {
                None => true,
                Some(b) => time < b.time || (time == b.time && surface < b.surface),
            };
            if better {
                best = Some(Contact { time, surface, face });
            }
        };

        if v.x < T::zero() {
            if let Some(t) = time_to_plane(p.x, v.x, c.inner_left() + h, horizon) {
                offer(t, Surface::LeftWall, Face::Vertical);
            }
        } else if v.x > T::zero() {
            if let Some(t) = time_to_plane(p.x, v.x, c.inner_right() - h, horizon) {
                offer(t, Surface::RightWall, Face::Vertical);
            }
        }
        if v.y < T::zero() {
            if let Some(t) = time_to_plane(p.y, v.y, T::units(c.ceiling_y) + h, horizon) {
                offer(t, Surface::Ceiling, Face::Horizontal);
            }
        } else if v.y > T::zero() {
            if let Some(t) = time_to_plane(p.y, v.y, T::units(c.field_height) - h, horizon) {
                offer(t, Surface::Floor, Face::Horizontal);
            }
            let top = T::units(c.paddle_y) - h;
            // only a ball still above the paddle's top face can land on it
            if p.y <= top {
                if let Some(t) = time_to_plane(p.y, v.y, top, horizon) {
                    let x = p.x + v.x * t;
                    let reach = s.paddle_width(c) / T::lit(2.0) + h;
                    if (x - s.paddle_x).abs() <= reach {
                        offer(t, Surface::Paddle, Face::Horizontal);
                    }
                }
            }
        }

        self.for_each_brick_in_sweep(horizon, |row, col| {
            let [l, t, r, b] = c.brick_rect(row, col);
            if let Some(sw) = sweep_box((p.x, p.y), (v.x, v.y), [l - h, t - h, r + h, b + h], horizon) {
                offer(sw.enter, Surface::Brick { row, col }, sw.face);
            }
        });
        best
    }

    /// Visits live bricks whose cells overlap the ball's swept bounding box.
    fn for_each_brick_in_sweep(&self, horizon: T, mut visit: impl FnMut(usize, usize)) {
        let c = self.config;
        let s = &*self.state;
        let h = c.ball_half();
        let end = Vec2::new(
            s.ball_pos.x + s.ball_vel.x * horizon,
            s.ball_pos.y + s.ball_vel.y * horizon,
        );
        let (y0, y1) = (s.ball_pos.y.min(end.y) - h, s.ball_pos.y.max(end.y) + h);
        let top = T::units(c.brick_top_y);
        let bh = T::units(c.brick_height);
        let rows = c.grid_rows as usize;
        let cols = c.grid_cols as usize;
        let band = |lo: T, hi: T, origin: T, size: T, n: usize| -> Option<(usize, usize)> {
            // a cell whose far edge is exactly at `lo` still counts as touched
            let first = ((lo - origin) / size).ceil() - T::one();
            let last = ((hi - origin) / size).floor();
            if last < T::zero() || first >= T::units(n as u32) {
                return None;
            }
            let first = first.max(T::zero()).to_usize().unwrap_or(0);
            let last = last.to_usize().unwrap_or(n - 1).min(n - 1);
            Some((first, last))
        };
        let Some((r0, r1)) = band(y0, y1, top, bh, rows) else {
            return;
        };
        let (x0, x1) = (s.ball_pos.x.min(end.x) - h, s.ball_pos.x.max(end.x) + h);
        let Some((c0, c1)) = band(x0, x1, c.inner_left(), c.brick_width(), cols) else {
            return;
        };
        for row in r0..=r1 {
            for col in c0..=c1 {
                if s.bricks_alive[row * cols + col] {
                    visit(row, col);
                }
            }
        }
    }

    /// Applies a contact. Returns false when the ball left play.
    fn resolve(&mut self, contact: Contact<T>) -> bool {
        let config = self.config;
        match contact.surface {
            Surface::Brick { row, col } => {
                let cols = config.grid_cols as usize;
                self.state.bricks_alive[row * cols + col] = false;
                let points = u64::from(brick_value(config, row).expect("row inside grid"));
                self.state.score += points;
                self.score_delta += points;
                self.events.push(Event::BrickHit { row, col });
                self.reflect(contact.face);
                if self.state.bricks_alive.iter().all(|&b| !b) {
                    self.clear_level();
                    return false;
                }
            }
            Surface::LeftWall | Surface::RightWall => {
                self.events.push(Event::WallHit);
                self.reflect(Face::Vertical);
                self.count_contact();
            }
            Surface::Ceiling => {
                self.events.push(Event::CeilingHit);
                self.reflect(Face::Horizontal);
                if config.shrink_paddle_on_ceiling && !self.state.paddle_shrunk {
                    self.state.paddle_shrunk = true;
                    let (lo, hi) = config.paddle_x_range(self.state.paddle_width(config));
                    self.state.paddle_x = self.state.paddle_x.max(lo).min(hi);
                }
                self.count_contact();
            }
            Surface::Paddle => {
                let s = &mut *self.state;
                let reach = s.paddle_width(config) / T::lit(2.0) + config.ball_half();
                let offset = (s.ball_pos.x - s.paddle_x).max(-reach).min(reach);
                let tilt = paddle_bounce_angle(offset, reach);
                s.ball_hit_count += 1;
                let speed = config.speed_at(s.ball_hit_count);
                let rad = tilt.to_radians();
                s.ball_vel = Vec2::new(speed * rad.sin(), -speed * rad.cos());
                self.events.push(Event::PaddleHit);
            }
            Surface::Floor => {
                self.lose_life();
                return false;
            }
        }
        true
    }

    fn reflect(&mut self, face: Face) {
        let v = &mut self.state.ball_vel;
        match face {
            Face::Vertical => v.x = -v.x,
            Face::Horizontal => v.y = -v.y,
            Face::Corner => {
                v.x = -v.x;
                v.y = -v.y;
            }
        }
    }

    fn count_contact(&mut self) {
        let s = &mut *self.state;
        s.ball_hit_count += 1;
        let speed = self.config.speed_at(s.ball_hit_count);
        let current = s.ball_vel.norm();
        if (speed - current).abs() > T::lit(1e-6) * speed && current > T::zero() {
            let k = speed / current;
            s.ball_vel = Vec2::new(s.ball_vel.x * k, s.ball_vel.y * k);
        }
    }

    fn lose_life(&mut self) {
        let s = &mut *self.state;
        s.lives_remaining = s.lives_remaining.saturating_sub(1);
        s.park_ball(self.config);
        s.lifecycle = if s.lives_remaining == 0 {
            Lifecycle::GameOver
        } else {
            Lifecycle::LifeLost
        };
        self.events.push(Event::LifeLost);
    }

    fn clear_level(&mut self) {
        let s = &mut *self.state;
        s.park_ball(self.config);
        self.events.push(Event::LevelCleared);
        if s.level >= self.config.levels_to_win {
            s.lifecycle = Lifecycle::GameWon;
            self.events.push(Event::GameWon);
        } else {
            s.lifecycle = Lifecycle::LevelCleared;
        }
    }
}

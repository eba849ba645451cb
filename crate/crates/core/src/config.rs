//! Game parameters.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Fixed simulation time base.
pub const FRAMES_PER_SECOND: u32 = 60;

/// Vertical distance from the paddle's top face to the served ball's center.
pub const SERVE_CLEARANCE: u32 = 8;

/// 8-bit RGB color, written as `#rrggbb` in documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub const fn hex(v: u32) -> Self {
        Rgb([(v >> 16) as u8, (v >> 8) as u8, v as u8])
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [r, g, b] = self.0;
        write!(f, "#{r:02x}{g:02x}{b:02x}")
    }
}

impl FromStr for Rgb {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let digits = s
            .strip_prefix('#')
            .ok_or_else(|| format!("color {s:?} must start with '#'"))?;
        if digits.len() != 6 {
            return Err(format!("color {s:?} must have six hex digits"));
        }
        u32::from_str_radix(digits, 16)
            .map(Rgb::hex)
            .map_err(|e| format!("color {s:?}: {e}"))
    }
}

impl Serialize for Rgb {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rgb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub background: Rgb,
    pub wall: Rgb,
    pub paddle: Rgb,
    pub ball: Rgb,
    pub text: Rgb,
    /// One color per brick row, top row first.
    pub rows: Vec<Rgb>,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            background: Rgb::hex(0x000000),
            wall: Rgb::hex(0x8e8e8e),
            paddle: Rgb::hex(0xd65c5c),
            ball: Rgb::hex(0xd65c5c),
            text: Rgb::hex(0x8e8e8e),
            rows: vec![
                Rgb::hex(0xc84848),
                Rgb::hex(0xc66c3a),
                Rgb::hex(0xb47a30),
                Rgb::hex(0xa2a22a),
                Rgb::hex(0x48a048),
                Rgb::hex(0x4248c8),
            ],
        }
    }
}

/// Once the ball has made `hits` paddle/wall contacts in the current life its
/// speed becomes `ball_speed * multiplier`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedStep<T> {
    pub hits: u32,
    pub multiplier: T,
}

/// Every tunable parameter of the game.
///
/// Coordinates are logical units with the origin at the top-left corner and y
/// growing downward. Integral fields describe the fixed geometry; the real
/// fields are generic over the simulator's scalar type.
#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig<T> {
    pub grid_cols: u32,
    pub grid_rows: u32,
    /// Brick value per row, top row first.
    pub row_points: Vec<u32>,
    pub field_width: u32,
    pub field_height: u32,
    /// Thickness of the left and right walls.
    pub wall_width: u32,
    /// y of the ceiling's lower face.
    pub ceiling_y: u32,
    pub brick_top_y: u32,
    pub brick_height: u32,
    pub paddle_width: u32,
    pub paddle_height: u32,
    /// y of the paddle's top face.
    pub paddle_y: u32,
    pub paddle_speed: u32,
    /// Edge of the square ball.
    pub ball_size: u32,
    pub ball_speed: T,
    pub speedup_schedule: Vec<SpeedStep<T>>,
    /// Serve direction, counterclockwise from rightward. The serve goes to this
    /// angle or its mirror image about the vertical.
    pub default_launch_angle_deg: T,
    pub lives: u32,
    pub levels_to_win: u32,
    pub frames_per_second: u32,
    pub rng_seed: u64,
    /// Halve the paddle after the ball first reaches the ceiling in a level.
    pub shrink_paddle_on_ceiling: bool,
    pub palette: Palette,
}

impl<T: Scalar> Default for GameConfig<T> {
    fn default() -> Self {
        GameConfig {
            grid_cols: 18,
            grid_rows: 6,
            row_points: vec![7, 7, 4, 4, 1, 1],
            field_width: 160,
            field_height: 210,
            wall_width: 8,
            ceiling_y: 32,
            brick_top_y: 57,
            brick_height: 6,
            paddle_width: 24,
            paddle_height: 4,
            paddle_y: 189,
            paddle_speed: 4,
            ball_size: 2,
            ball_speed: T::lit(2.0),
            speedup_schedule: Vec::new(),
            default_launch_angle_deg: T::lit(60.0),
            lives: 5,
            levels_to_win: 2,
            frames_per_second: FRAMES_PER_SECOND,
            rng_seed: 0,
            shrink_paddle_on_ceiling: false,
            palette: Palette::default(),
        }
    }
}

fn require(cond: bool, field: &str, reason: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::config(field, reason()))
    }
}

impl<T: Scalar> GameConfig<T> {
    /// Checks every structural invariant, naming the first offending field.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("grid_cols", self.grid_cols),
            ("grid_rows", self.grid_rows),
            ("field_width", self.field_width),
            ("field_height", self.field_height),
            ("brick_height", self.brick_height),
            ("paddle_width", self.paddle_width),
            ("paddle_height", self.paddle_height),
            ("paddle_speed", self.paddle_speed),
            ("ball_size", self.ball_size),
            ("lives", self.lives),
            ("levels_to_win", self.levels_to_win),
        ] {
            require(v > 0, name, || "must be positive".into())?;
        }
        require(self.row_points.len() == self.grid_rows as usize, "row_points", || {
            format!(
                "has {} entries but grid_rows is {}",
                self.row_points.len(),
                self.grid_rows
            )
        })?;
        require(
            self.palette.rows.len() == self.grid_rows as usize,
            "palette.rows",
            || {
                format!(
                    "has {} colors but grid_rows is {}",
                    self.palette.rows.len(),
                    self.grid_rows
                )
            },
        )?;
        require(
            2 * self.wall_width + self.paddle_width <= self.field_width,
            "paddle_width",
            || "paddle does not fit between the walls".into(),
        )?;
        require(
            2 * self.wall_width + self.ball_size < self.field_width,
            "wall_width",
            || "no room for the ball between the walls".into(),
        )?;
        require(self.ceiling_y < self.brick_top_y, "ceiling_y", || {
            "ceiling must lie above the brick region".into()
        })?;
        let serve_top = self.paddle_y.checked_sub(SERVE_CLEARANCE + self.ball_size);
        require(
            serve_top.is_some_and(|top| self.brick_region_bottom() < top),
            "brick_top_y",
            || "brick region must end above the serve position".into(),
        )?;
        require(
            self.paddle_y + self.paddle_height <= self.field_height,
            "paddle_y",
            || "paddle must fit inside field_height".into(),
        )?;
        require(self.frames_per_second == FRAMES_PER_SECOND, "frames_per_second", || {
            format!("time base is fixed at {FRAMES_PER_SECOND}")
        })?;
        require(
            self.ball_speed.is_finite() && self.ball_speed > T::zero(),
            "ball_speed",
            || "must be positive and finite".into(),
        )?;
        let angle = self.default_launch_angle_deg;
        require(
            angle.is_finite() && angle > T::zero() && angle < T::lit(180.0),
            "default_launch_angle_deg",
            || "serve must head upward (0 < angle < 180)".into(),
        )?;
        let mut last_hits = None;
        for (i, step) in self.speedup_schedule.iter().enumerate() {
            let field = format!("speedup_schedule[{i}]");
            require(last_hits.is_none_or(|h| step.hits > h), &field, || {
                "hit thresholds must be strictly increasing".into()
            })?;
            require(
                step.multiplier.is_finite() && step.multiplier > T::zero(),
                &field,
                || "multiplier must be positive and finite".into(),
            )?;
            last_hits = Some(step.hits);
        }
        Ok(())
    }

    pub fn brick_count(&self) -> usize {
        (self.grid_rows * self.grid_cols) as usize
    }

    pub fn brick_region_bottom(&self) -> u32 {
        self.brick_top_y + self.grid_rows * self.brick_height
    }

    pub(crate) fn inner_left(&self) -> T {
        T::units(self.wall_width)
    }

    pub(crate) fn inner_right(&self) -> T {
        T::units(self.field_width - self.wall_width)
    }

    pub(crate) fn brick_width(&self) -> T {
        T::units(self.field_width - 2 * self.wall_width) / T::units(self.grid_cols)
    }

    pub(crate) fn ball_half(&self) -> T {
        T::units(self.ball_size) / T::lit(2.0)
    }

    /// Left, top, right, bottom edges of brick `(row, col)`.
    pub(crate) fn brick_rect(&self, row: usize, col: usize) -> [T; 4] {
        let w = self.brick_width();
        let h = T::units(self.brick_height);
        let left = self.inner_left() + w * T::units(col as u32);
        let top = T::units(self.brick_top_y) + h * T::units(row as u32);
        [left, top, left + w, top + h]
    }

    /// Paddle center coordinate range that keeps a paddle of `width` between the walls.
    pub(crate) fn paddle_x_range(&self, width: T) -> (T, T) {
        let half = width / T::lit(2.0);
        (self.inner_left() + half, self.inner_right() - half)
    }

    /// y of a parked ball's center.
    pub fn serve_y(&self) -> T {
        T::units(self.paddle_y - SERVE_CLEARANCE)
    }

    /// Ball speed after `hits` contacts in the current life.
    pub fn speed_at(&self, hits: u32) -> T {
        let multiplier = self
            .speedup_schedule
            .iter()
            .take_while(|s| s.hits <= hits)
            .last()
            .map_or(T::one(), |s| s.multiplier);
        (self.ball_speed * multiplier).quantize()
    }
}

/// Points awarded for a brick in `row` (0 is the top row).
pub fn brick_value<T: Scalar>(config: &GameConfig<T>, row: usize) -> Result<u32> {
    config
        .row_points
        .get(row)
        .copied()
        .filter(|_| row < config.grid_rows as usize)
        .ok_or(Error::OutOfRange {
            what: "brick row",
            index: row,
            limit: config.grid_rows as usize,
        })
}

/// Points available in one full wall of bricks.
pub fn level_total_score<T: Scalar>(config: &GameConfig<T>) -> u64 {
    u64::from(config.grid_cols) * config.row_points.iter().map(|&p| u64::from(p)).sum::<u64>()
}

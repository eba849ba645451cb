//! Software rasterizer producing 210x160 RGB frames.

use crate::config::{GameConfig, Rgb};
use crate::game::GameState;
use crate::scalar::Scalar;

pub const FRAME_HEIGHT: usize = 210;
pub const FRAME_WIDTH: usize = 160;
pub const FRAME_CHANNELS: usize = 3;

/// Height of the wall band drawn above the ceiling.
const CEILING_BAND: u32 = 15;
const HUD_TOP: i64 = 5;

// 5x7 digits, one byte per row, bit 4 is the leftmost column
const DIGITS: [[u8; 7]; 10] = [
    [0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e],
    [0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e],
    [0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f],
    [0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e],
    [0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02],
    [0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e],
    [0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e],
    [0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08],
    [0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e],
    [0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c],
];

/// Row-major `height x width x 3` RGB bytes.
#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    data: Vec<u8>,
}

impl std::fmt::Debug for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Frame({}x{}x{})", FRAME_HEIGHT, FRAME_WIDTH, FRAME_CHANNELS)
    }
}

impl Frame {
    fn filled(color: Rgb) -> Self {
        let mut data = Vec::with_capacity(FRAME_HEIGHT * FRAME_WIDTH * FRAME_CHANNELS);
        for _ in 0..FRAME_HEIGHT * FRAME_WIDTH {
            data.extend_from_slice(&color.0);
        }
        Frame { data }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (FRAME_HEIGHT, FRAME_WIDTH, FRAME_CHANNELS)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, y: usize, x: usize) -> Rgb {
        let i = (y * FRAME_WIDTH + x) * FRAME_CHANNELS;
        Rgb([self.data[i], self.data[i + 1], self.data[i + 2]])
    }

    /// Fills `[x0, x1) x [y0, y1)`, clipped to the frame.
    fn fill_rect(&mut self, x0: i64, y0: i64, x1: i64, y1: i64, color: Rgb) {
        let cx = |v: i64| v.clamp(0, FRAME_WIDTH as i64) as usize;
        let cy = |v: i64| v.clamp(0, FRAME_HEIGHT as i64) as usize;
        for y in cy(y0)..cy(y1) {
            let row = y * FRAME_WIDTH;
            for x in cx(x0)..cx(x1) {
                let i = (row + x) * FRAME_CHANNELS;
                self.data[i..i + 3].copy_from_slice(&color.0);
            }
        }
    }

    fn draw_number(&mut self, mut n: u64, right_x: i64, top: i64, color: Rgb) {
        let mut x = right_x;
        loop {
            x -= 5;
            let glyph = &DIGITS[(n % 10) as usize];
            for (dy, bits) in glyph.iter().enumerate() {
                for dx in 0..5 {
                    if bits & (0x10 >> dx) != 0 {
                        let (px, py) = (x + dx, top + dy as i64);
                        self.fill_rect(px, py, px + 1, py + 1, color);
                    }
                }
            }
            x -= 1;
            n /= 10;
            if n == 0 {
                break;
            }
        }
    }
}

fn px<T: Scalar>(v: T) -> i64 {
    v.floor().to_i64().unwrap_or(0)
}

/// Rasterizes `state`: background, walls, bricks in their row colors, paddle,
/// ball, and the score / lives / level readout. Pure in its inputs.
pub fn render_frame<T: Scalar>(state: &GameState<T>, config: &GameConfig<T>) -> Frame {
    let pal = &config.palette;
    let mut frame = Frame::filled(pal.background);

    let (w, h) = (config.field_width as i64, config.field_height as i64);
    let wall = config.wall_width as i64;
    let ceiling = config.ceiling_y as i64;
    let band_top = i64::from(config.ceiling_y.saturating_sub(CEILING_BAND));
    frame.fill_rect(0, band_top, w, ceiling, pal.wall);
    frame.fill_rect(0, band_top, wall, h, pal.wall);
    frame.fill_rect(w - wall, band_top, w, h, pal.wall);

    let cols = config.grid_cols as usize;
    for (i, _) in state.bricks_alive.iter().enumerate().filter(|(_, &alive)| alive) {
        let (row, col) = (i / cols, i % cols);
        let [l, t, r, b] = config.brick_rect(row, col);
        frame.fill_rect(px(l), px(t), px(r), px(b), pal.rows[row]);
    }

    let half = state.paddle_width(config) / T::lit(2.0);
    let top = config.paddle_y as i64;
    frame.fill_rect(
        px((state.paddle_x - half).round()),
        top,
        px((state.paddle_x + half).round()),
        top + config.paddle_height as i64,
        pal.paddle,
    );

    if state.ball_in_play {
        let r = config.ball_half();
        let size = config.ball_size as i64;
        let x0 = px((state.ball_pos.x - r).round());
        let y0 = px((state.ball_pos.y - r).round());
        frame.fill_rect(x0, y0, x0 + size, y0 + size, pal.ball);
    }

    frame.draw_number(state.score, 56, HUD_TOP, pal.text);
    frame.draw_number(state.lives_remaining.into(), 104, HUD_TOP, pal.text);
    frame.draw_number(state.level.into(), 136, HUD_TOP, pal.text);
    frame
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::new_game;
    use std::collections::BTreeSet;

    type Config = GameConfig<f64>;

    fn brick_region_colors(frame: &Frame, c: &Config) -> BTreeSet<[u8; 3]> {
        let mut seen = BTreeSet::new();
        for y in c.brick_top_y as usize..c.brick_region_bottom() as usize {
            for x in 0..FRAME_WIDTH {
                seen.insert(frame.pixel(y, x).0);
            }
        }
        seen
    }

    #[test]
    fn frame_shape() {
        let c = Config::default();
        let f = render_frame(&new_game(&c).unwrap(), &c);
        assert_eq!(f.shape(), (210, 160, 3));
        assert_eq!(f.as_bytes().len(), 210 * 160 * 3);
    }

    #[test]
    fn fresh_frame_shows_every_row_color() {
        let c = Config::default();
        let f = render_frame(&new_game(&c).unwrap(), &c);
        let seen = brick_region_colors(&f, &c);
        let rows: BTreeSet<[u8; 3]> = c.palette.rows.iter().map(|r| r.0).collect();
        assert_eq!(rows.len(), 6);
        assert_eq!(seen.intersection(&rows).count(), 6);
        // each row band is uniformly its own color between the walls
        for (row, color) in c.palette.rows.iter().enumerate() {
            let y = (c.brick_top_y + row as u32 * c.brick_height) as usize + 2;
            for x in 8..152 {
                assert_eq!(f.pixel(y, x), *color);
            }
        }
    }

    #[test]
    fn empty_wall_has_no_brick_pixels() {
        let c = Config::default();
        let mut s = new_game(&c).unwrap();
        s.bricks_alive.fill(false);
        let f = render_frame(&s, &c);
        let seen = brick_region_colors(&f, &c);
        assert!(c.palette.rows.iter().all(|r| !seen.contains(&r.0)));
    }

    #[test]
    fn identical_states_render_identically() {
        let c = Config::default();
        let s = new_game(&c).unwrap();
        assert_eq!(render_frame(&s, &c), render_frame(&s.clone(), &c));
    }

    #[test]
    fn score_digits_change_the_hud() {
        let c = Config::default();
        let mut s = new_game(&c).unwrap();
        let a = render_frame(&s, &c);
        s.score = 432;
        let b = render_frame(&s, &c);
        let hud = |f: &Frame| -> Vec<Rgb> {
            (5..12)
                .flat_map(|y| (0..60).map(move |x| (y, x)))
                .map(|(y, x)| f.pixel(y, x))
                .collect()
        };
        assert_ne!(hud(&a), hud(&b));
    }
}

//! Swept collision primitives for a square ball against axis-aligned boxes.

use crate::scalar::Scalar;

/// Largest outgoing angle off the paddle, measured from straight up.
pub const MAX_BOUNCE_DEG: f64 = 60.0;

/// Outgoing direction after a paddle hit, in degrees from straight up
/// (positive tilts right).
///
/// `hit_offset` is the ball center minus the paddle center at contact and
/// `paddle_half_width` the largest offset that still counts as a hit. The
/// mapping is linear, odd, and saturates at ±60°.
pub fn paddle_bounce_angle<T: Scalar>(hit_offset: T, paddle_half_width: T) -> T {
    debug_assert!(paddle_half_width > T::zero());
    debug_assert!(
        hit_offset.abs() <= paddle_half_width * T::lit(1.0 + 1e-9),
        "offset {hit_offset} beyond paddle half-width {paddle_half_width}"
    );
    let max = T::lit(MAX_BOUNCE_DEG);
    (max * hit_offset / paddle_half_width).max(-max).min(max)
}

/// Unit direction `(dx, dy)` for an angle counterclockwise from rightward, in
/// screen coordinates (y down), so 90° is straight up.
///
/// Evaluated in f64: single-precision trig leaves residues near 1e-7 on the
/// axes, which would survive quantization and tilt a horizontal ball.
pub fn direction<T: Scalar>(angle_deg: T) -> (T, T) {
    let rad = angle_deg.as_f64().to_radians();
    (T::from_f64_lossy(rad.cos()), T::from_f64_lossy(-rad.sin()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Face {
    Vertical,
    Horizontal,
    Corner,
}

/// Contact window of a moving point against a box already expanded by the
/// ball's half-extent.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sweep<T> {
    pub enter: T,
    pub face: Face,
}

const TOUCH_EPS: f64 = 1e-9;

fn slab<T: Scalar>(p: T, v: T, lo: T, hi: T) -> Option<(T, T)> {
    if v == T::zero() {
        (p > lo && p < hi).then(|| (T::neg_infinity(), T::infinity()))
    } else {
        let a = (lo - p) / v;
        let b = (hi - p) / v;
        Some((a.min(b), a.max(b)))
    }
}

/// Earliest time in `[0, horizon]` at which point `p` moving with `v` enters
/// `rect = [left, top, right, bottom]`.
pub(crate) fn sweep_box<T: Scalar>(p: (T, T), v: (T, T), rect: [T; 4], horizon: T) -> Option<Sweep<T>> {
    let (x_in, x_out) = slab(p.0, v.0, rect[0], rect[2])?;
    let (y_in, y_out) = slab(p.1, v.1, rect[1], rect[3])?;
    let enter = x_in.max(y_in);
    let exit = x_out.min(y_out);
    if exit <= T::zero() || enter >= exit || enter > horizon || enter < -T::lit(TOUCH_EPS) {
        return None;
    }
    let face = if x_in > y_in {
        Face::Vertical
    } else if y_in > x_in {
        Face::Horizontal
    } else {
        Face::Corner
    };
    Some(Sweep {
        enter: enter.max(T::zero()),
        face,
    })
}

/// Time for coordinate `p` moving at `v` to reach `plane`, clamped to zero when
/// already at or past it. Callers only ask when `v` points toward the plane.
pub(crate) fn time_to_plane<T: Scalar>(p: T, v: T, plane: T, horizon: T) -> Option<T> {
    debug_assert!(v != T::zero());
    let t = ((plane - p) / v).max(T::zero());
    (t <= horizon).then_some(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bounce_angle_landmarks() {
        assert_eq!(paddle_bounce_angle(0.0f64, 13.0), 0.0);
        assert_eq!(paddle_bounce_angle(13.0f64, 13.0), 60.0);
        assert_eq!(paddle_bounce_angle(-13.0f64, 13.0), -60.0);
        assert_eq!(paddle_bounce_angle(6.5f64, 13.0), 30.0);
    }

    proptest! {
        #[test]
        fn bounce_angle_is_odd_and_monotone(a in -13.0f64..13.0, b in -13.0f64..13.0) {
            prop_assert_eq!(paddle_bounce_angle(-a, 13.0), -paddle_bounce_angle(a, 13.0));
            if a <= b {
                prop_assert!(paddle_bounce_angle(a, 13.0) <= paddle_bounce_angle(b, 13.0));
            }
            prop_assert!(paddle_bounce_angle(a, 13.0).abs() <= 60.0);
        }
    }

    #[test]
    fn direction_axes() {
        let (dx, dy) = direction(90.0f64);
        assert!(dx.abs() < 1e-15 && dy == -1.0);
        let (dx, dy) = direction(0.0f64);
        assert!(dx == 1.0 && dy.abs() < 1e-15);
    }

    #[test]
    fn sweep_hits_face() {
        let rect = [10.0, 10.0, 20.0, 20.0];
        let s = sweep_box((5.0f64, 15.0), (10.0, 0.0), rect, 1.0).unwrap();
        assert_eq!(s.enter, 0.5);
        assert_eq!(s.face, Face::Vertical);

        let s = sweep_box((15.0f64, 30.0), (0.0, -20.0), rect, 1.0).unwrap();
        assert_eq!(s.enter, 0.5);
        assert_eq!(s.face, Face::Horizontal);

        let s = sweep_box((0.0f64, 0.0), (20.0, 20.0), rect, 1.0).unwrap();
        assert_eq!(s.face, Face::Corner);
    }

    #[test]
    fn sweep_misses() {
        let rect = [10.0, 10.0, 20.0, 20.0];
        // too slow to arrive this frame
        assert!(sweep_box((5.0f64, 15.0), (1.0, 0.0), rect, 1.0).is_none());
        // moving away from a touching face
        assert!(sweep_box((10.0f64, 15.0), (-1.0, 0.0), rect, 1.0).is_none());
        // grazing along an edge does not count
        assert!(sweep_box((5.0f64, 10.0), (10.0, 0.0), rect, 1.0).is_none());
    }

    #[test]
    fn plane_timing() {
        assert_eq!(time_to_plane(5.0f64, -2.0, 1.0, 1.0), None);
        assert_eq!(time_to_plane(2.0f64, -2.0, 1.0, 1.0), Some(0.5));
        assert_eq!(time_to_plane(1.0f64, -2.0, 1.0, 1.0), Some(0.0));
        // already past the plane: immediate contact
        assert_eq!(time_to_plane(0.5f64, -2.0, 1.0, 1.0), Some(0.0));
    }
}

use proptest::prelude::*;
use toybox_core::intervention::{set_ball, StateDocument};
use toybox_core::{
    export_state, import_state, new_game, step_frame, Action, Event, GameConfig, GameState, Lifecycle, Scalar, Vec2,
};

fn actions() -> impl Strategy<Value = Vec<Action>> {
    prop::collection::vec((0usize..4).prop_map(|i| Action::from_index(i).unwrap()), 1..1_500)
}

/// Plays `actions`, restarting after game end, and checks the per-frame
/// invariants on the way.
fn check_invariants<T: Scalar>(seed: u64, actions: &[Action]) -> Result<(), TestCaseError> {
    let config = GameConfig::<T> {
        rng_seed: seed,
        ..GameConfig::default()
    };
    let mut s = new_game(&config).unwrap();
    let speed = config.speed_at(0).as_f64();
    let h = f64::from(config.ball_size) / 2.0;
    for &a in actions {
        if s.lifecycle.is_terminal() {
            s = new_game(&config).unwrap();
        }
        let before = s.clone();
        let out = step_frame(&mut s, &config, a).unwrap();
        let lost = out.events.contains(&Event::LifeLost);
        let (bx, by) = (s.ball_pos.x.as_f64(), s.ball_pos.y.as_f64());
        prop_assert!(s.score >= before.score);
        prop_assert!(s.lives_remaining <= before.lives_remaining);
        if s.level == before.level && !out.events.contains(&Event::LevelCleared) {
            prop_assert!(s.live_brick_count() <= before.live_brick_count());
        }
        if !lost {
            prop_assert!((8.0 + h..=152.0 - h).contains(&bx), "ball x {bx}");
            prop_assert!((32.0 + h..=210.0 - h).contains(&by), "ball y {by}");
        }
        let px = s.paddle_x.as_f64();
        prop_assert!((20.0..=140.0).contains(&px), "paddle {px}");
        if s.ball_in_play {
            let v = s.ball_vel.norm().as_f64();
            prop_assert!((v - speed).abs() < 1e-5, "speed {v}");
        } else {
            prop_assert_eq!(s.ball_vel, Vec2::default());
        }
        let points: u64 = out
            .events
            .iter()
            .filter_map(|e| match e {
                Event::BrickHit { row, .. } => Some(u64::from(config.row_points[*row])),
                _ => None,
            })
            .sum();
        prop_assert_eq!(out.score_delta, points);
        prop_assert_eq!(s.score - before.score, points);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariants_hold_f64(seed in any::<u64>(), acts in actions()) {
        check_invariants::<f64>(seed, &acts)?;
    }

    #[test]
    fn invariants_hold_f32(seed in any::<u64>(), acts in actions()) {
        check_invariants::<f32>(seed, &acts)?;
    }

    /// Stopping, exporting through text, importing and carrying on gives the
    /// same frames as never stopping.
    #[test]
    fn continuation_matches_uninterrupted_play(seed in any::<u64>(), acts in actions(), cut in 0usize..1_500) {
        let config = GameConfig::<f64> { rng_seed: seed, ..GameConfig::default() };
        let cut = cut % acts.len();
        let mut straight = new_game(&config).unwrap();
        let mut resumed = new_game(&config).unwrap();
        for &a in &acts[..cut] {
            if straight.lifecycle.is_terminal() { break; }
            step_frame(&mut straight, &config, a).unwrap();
            step_frame(&mut resumed, &config, a).unwrap();
        }
        let text = export_state(&resumed, &config).to_json();
        let (mut resumed, config2): (GameState<f64>, _) = import_state(&StateDocument::from_json(&text).unwrap()).unwrap();
        prop_assert_eq!(&config2, &config);
        for &a in &acts[cut..] {
            if straight.lifecycle.is_terminal() { break; }
            let x = step_frame(&mut straight, &config, a).unwrap();
            let y = step_frame(&mut resumed, &config2, a).unwrap();
            prop_assert_eq!(x, y);
            prop_assert_eq!(&straight, &resumed);
        }
    }

    /// A ball moving level below the bricks never scores, whatever the paddle does.
    #[test]
    fn horizontal_ball_never_scores(
        x in 12.0f64..148.0,
        y in 100.0f64..180.0,
        left in any::<bool>(),
        acts in prop::collection::vec((0usize..4).prop_map(|i| Action::from_index(i).unwrap()), 500..3_000),
    ) {
        let config = GameConfig::<f64>::default();
        let mut s = new_game(&config).unwrap();
        let angle = if left { 180.0 } else { 0.0 };
        set_ball(&mut s, &config, Vec2::new(x, y), angle, 2.0).unwrap();
        for &a in &acts {
            let out = step_frame(&mut s, &config, a).unwrap();
            prop_assert_eq!(out.score_delta, 0);
            prop_assert_eq!(s.ball_vel.y, 0.0);
            prop_assert_eq!(s.lifecycle, Lifecycle::Playing);
        }
        prop_assert_eq!(s.score, 0);
    }
}

#[test]
fn same_seed_same_game() {
    let config = GameConfig::<f64> {
        rng_seed: 99,
        ..GameConfig::default()
    };
    let script: Vec<Action> = (0..20_000).map(|i| Action::ALL[(i * 7 + i / 13) % 4]).collect();
    let play = || {
        let mut s = new_game(&config).unwrap();
        let mut docs = Vec::new();
        for (i, &a) in script.iter().enumerate() {
            if s.lifecycle.is_terminal() {
                s = new_game(&config).unwrap();
            }
            step_frame(&mut s, &config, a).unwrap();
            if i % 97 == 0 {
                docs.push(export_state(&s, &config).to_json());
            }
        }
        docs
    };
    let first = play();
    assert_eq!(first.len(), 207);
    assert_eq!(first, play());
}

#[test]
fn f32_and_f64_agree_on_axis_motion() {
    // straight up from the paddle center, so every bounce stays on the axis and
    // every position is exact in both types
    let c64 = GameConfig::<f64>::default();
    let c32 = GameConfig::<f32>::default();
    let mut a = new_game(&c64).unwrap();
    let mut b = new_game(&c32).unwrap();
    set_ball(&mut a, &c64, Vec2::new(80.0, 181.0), 90.0, 2.0).unwrap();
    set_ball(&mut b, &c32, Vec2::new(80.0, 181.0), 90.0, 2.0).unwrap();
    for _ in 0..400 {
        let x = step_frame(&mut a, &c64, Action::Noop).unwrap();
        let y = step_frame(&mut b, &c32, Action::Noop).unwrap();
        assert_eq!(x, y);
        assert_eq!(export_state(&a, &c64).state, export_state(&b, &c32).state);
    }
    assert!(a.score > 0);
}

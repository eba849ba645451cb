//! One agent, one case, one seed.

use serde::{Deserialize, Serialize};
use toybox_core::env::Env;
use toybox_core::{Agent, EnvParams, EpisodePolicy, Event, Scalar};

use crate::error::{HarnessError, Result};
use crate::suites::TestCase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Success,
    Death,
    /// The budget ran out, or the level ended, without the predicate holding.
    Timeout,
}

/// Horizontal direction of a serve made during the trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ServeSide {
    Left,
    Right,
    Straight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub case_id: String,
    pub seed: u64,
    pub outcome: Outcome,
    /// Simulator frames advanced.
    pub frames_used: u64,
    /// Agent decisions taken; each covers up to `frame_skip` frames.
    pub agent_steps_used: u64,
    pub final_score: u64,
    /// First serve of the trial, if the ball started parked.
    pub serve: Option<ServeSide>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialParams {
    /// Frames each agent decision is held for.
    pub frame_skip: u32,
    /// Seeds the serve-side RNG. Agents are seeded separately by the caller.
    pub seed: u64,
    /// Render pixels into each observation. Baselines only read the state view.
    pub render: bool,
}

impl TrialParams {
    pub fn new(frame_skip: u32, seed: u64) -> Self {
        TrialParams {
            frame_skip,
            seed,
            render: false,
        }
    }
}

/// Decisions needed to spend `budget_frames` at `frame_skip`.
pub fn agent_step_budget(budget_frames: u64, frame_skip: u32) -> u64 {
    budget_frames.div_ceil(u64::from(frame_skip.max(1)))
}

/// Plays `case` until its predicate holds, the single life is lost, or the
/// frame budget is spent. The frame budget is a hard stop, even part-way
/// through a held action.
pub fn run_trial<T: Scalar>(case: &TestCase, agent: &mut dyn Agent<T>, params: TrialParams) -> Result<TrialResult> {
    if params.frame_skip == 0 {
        return Err(HarnessError::InvalidArgument {
            arg: "frame_skip",
            reason: "must be at least 1".into(),
        });
    }
    if case.budget_frames == 0 {
        return Err(HarnessError::InvalidArgument {
            arg: "budget_frames",
            reason: format!("case {} has a zero budget", case.id),
        });
    }
    let tag = |source| HarnessError::Trial {
        case_id: case.id.clone(),
        seed: params.seed,
        source,
    };
    let env_params = EnvParams {
        frame_skip: 1,
        truncate_rewards: false,
        episode_policy: EpisodePolicy::SingleLifeSingleLevel,
        seed: Some(params.seed),
        render: params.render,
    };
    let mut env = Env::<T>::from_document(&case.start, env_params).map_err(tag)?;
    agent.reset();

    let mut frames = 0u64;
    let mut steps = 0u64;
    let mut serve = None;
    let outcome = 'play: loop {
        if frames >= case.budget_frames || env.is_done() {
            break Outcome::Timeout;
        }
        let action = agent.act(&env.observe()).map_err(|source| HarnessError::Agent {
            case_id: case.id.clone(),
            seed: params.seed,
            source,
        })?;
        steps += 1;
        for _ in 0..params.frame_skip {
            let was_parked = !env.state().ball_in_play;
            let out = env.step_frame(action).map_err(tag)?;
            frames += 1;
            let state = env.state();
            if serve.is_none() && was_parked && state.ball_in_play {
                serve = Some(match state.ball_vel.x.partial_cmp(&T::zero()) {
                    Some(std::cmp::Ordering::Less) => ServeSide::Left,
                    Some(std::cmp::Ordering::Greater) => ServeSide::Right,
                    _ => ServeSide::Straight,
                });
            }
            if case.success_predicate.holds(state, env.config()) {
                break 'play Outcome::Success;
            }
            if out.events.contains(&Event::LifeLost) {
                break 'play Outcome::Death;
            }
            if frames >= case.budget_frames || env.is_done() {
                break 'play Outcome::Timeout;
            }
        }
    };

    Ok(TrialResult {
        case_id: case.id.clone(),
        seed: params.seed,
        outcome,
        frames_used: frames,
        agent_steps_used: steps,
        final_score: env.state().score,
        serve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suites::{gen_r1_suite, gen_r2_suite};
    use toybox_core::{Action, AgentError, Config, Observation, RandomAgent, ReplayAgent, Tracker};

    struct Counting {
        calls: u64,
        action: Action,
    }

    impl Agent<f64> for Counting {
        fn act(&mut self, _: &Observation<f64>) -> std::result::Result<Action, AgentError> {
            self.calls += 1;
            Ok(self.action)
        }
    }

    struct Broken;

    impl Agent<f64> for Broken {
        fn act(&mut self, _: &Observation<f64>) -> std::result::Result<Action, AgentError> {
            Err(AgentError("no policy".into()))
        }
    }

    #[test]
    fn step_budget_rounds_up() {
        assert_eq!(agent_step_budget(14_400, 4), 3_600);
        assert_eq!(agent_step_budget(10, 4), 3);
        assert_eq!(agent_step_budget(10, 1), 10);
    }

    #[test]
    fn never_serving_times_out_at_the_budget() {
        let config = Config::default();
        let case = gen_r1_suite(&config).unwrap().remove(0).with_budget(1_001);
        let mut agent = Counting {
            calls: 0,
            action: Action::Noop,
        };
        let r = run_trial(&case, &mut agent, TrialParams::new(4, 0)).unwrap();
        assert_eq!(r.outcome, Outcome::Timeout);
        assert_eq!(r.frames_used, 1_001);
        // 250 full decisions plus one cut short by the budget
        assert_eq!(r.agent_steps_used, 251);
        assert_eq!(agent.calls, 251);
        assert_eq!(r.serve, None);
        assert_eq!(r.final_score, 432 - 7);
    }

    #[test]
    fn serve_side_is_recorded() {
        let config = Config::default();
        let case = gen_r1_suite(&config).unwrap().remove(0).with_budget(10);
        let mut agent = ReplayAgent::new(vec![Action::Fire]).unwrap();
        let r = run_trial::<f64>(&case, &mut agent, TrialParams::new(1, 3)).unwrap();
        assert_eq!(r.outcome, Outcome::Timeout);
        assert!(matches!(r.serve, Some(ServeSide::Left | ServeSide::Right)));
    }

    #[test]
    fn running_from_a_falling_ball_dies() {
        let config = Config::default();
        let case = gen_r2_suite(&config, &[270.0]).unwrap().remove(0);
        let mut agent = ReplayAgent::new(vec![Action::Left; 100]).unwrap();
        let r = run_trial::<f64>(&case, &mut agent, TrialParams::new(1, 0)).unwrap();
        // the paddle is 16 units away by the time the ball reaches its face
        // (reach 13), and the ball's center reaches y = 209 after 14 frames
        assert_eq!(r.outcome, Outcome::Death);
        assert_eq!(r.frames_used, 14);
        assert_eq!(r.final_score, 0);
    }

    #[test]
    fn straight_up_hits_the_brick_above() {
        let config = Config::default();
        let mut cases = gen_r2_suite(&config, &[90.0]).unwrap();
        // x = 80 is the seam between (5, 8) and (5, 9); the tie goes to the lower column
        let mut case = cases.remove(0);
        case.success_predicate = crate::suites::SuccessPredicate::TargetBrickCleared { row: 5, col: 8 };
        let mut agent = Counting {
            calls: 0,
            action: Action::Noop,
        };
        let r = run_trial(&case, &mut agent, TrialParams::new(4, 0)).unwrap();
        assert_eq!(r.outcome, Outcome::Success);
        // from y = 181 up to the brick's lower face plus half the ball: 181 - 94 = 87 units at 2 per frame
        assert_eq!(r.frames_used, 44);
        assert_eq!(r.agent_steps_used, 11);
        assert_eq!(r.final_score, 1);
    }

    #[test]
    fn trials_replay_exactly() {
        let config = Config::default();
        let case = gen_r1_suite(&config).unwrap().remove(40).with_budget(3_000);
        let run = |seed| {
            let mut agent = RandomAgent::new(seed);
            run_trial::<f64>(&case, &mut agent, TrialParams::new(4, seed)).unwrap()
        };
        assert_eq!(run(5), run(5));
    }

    #[test]
    fn tracker_never_dies_straight_up() {
        let config = Config::default();
        let case = gen_r2_suite(&config, &[90.0]).unwrap().remove(0);
        let mut agent = Tracker::new(&config, 4);
        let r = run_trial(&case, &mut agent, TrialParams::new(4, 0)).unwrap();
        assert_ne!(r.outcome, Outcome::Death);
        assert!(r.frames_used <= case.budget_frames);
    }

    #[test]
    fn agent_failure_is_an_error_not_an_outcome() {
        let config = Config::default();
        let case = gen_r1_suite(&config).unwrap().remove(0);
        let err = run_trial(&case, &mut Broken, TrialParams::new(4, 9)).unwrap_err();
        assert!(matches!(err, HarnessError::Agent { seed: 9, .. }), "{err}");
    }

    #[test]
    fn zero_frame_skip_is_rejected() {
        let config = Config::default();
        let case = gen_r1_suite(&config).unwrap().remove(0);
        let mut agent = RandomAgent::new(0);
        assert!(run_trial::<f64>(&case, &mut agent, TrialParams::new(0, 0)).is_err());
    }
}

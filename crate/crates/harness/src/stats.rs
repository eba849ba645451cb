//! Per-case aggregates over trial results.

use serde::{Deserialize, Serialize};

use crate::trial::{agent_step_budget, Outcome, TrialResult};

/// Linear-interpolation percentile of sorted `xs`, `p` in `[0, 1]`.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "percentile of no values");
    let pos = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn median(sorted: &[f64]) -> f64 {
    percentile(sorted, 0.5)
}

fn sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseAggregate {
    pub trials: u64,
    pub successes: u64,
    pub deaths: u64,
    pub timeouts: u64,
    pub success_rate: f64,
    /// Median frames to success; failed trials count as the full budget.
    pub median_frames: f64,
    /// Same, in agent decisions.
    pub median_agent_steps: f64,
    /// `1 / median_frames`.
    pub reciprocal_median: f64,
    /// `1 / median_agent_steps`.
    pub reciprocal_median_agent_steps: f64,
    pub mean_score: f64,
    pub max_score: u64,
    pub median_score: f64,
    pub p25_score: f64,
    pub p75_score: f64,
}

impl CaseAggregate {
    /// `None` for an empty trial list.
    pub fn from_trials(trials: &[TrialResult], budget_frames: u64, frame_skip: u32) -> Option<Self> {
        if trials.is_empty() {
            return None;
        }
        let n = trials.len() as u64;
        let count = |o: Outcome| trials.iter().filter(|t| t.outcome == o).count() as u64;
        let successes = count(Outcome::Success);
        let step_budget = agent_step_budget(budget_frames, frame_skip);
        let censored = |t: &TrialResult, used: u64, cap: u64| {
            if t.outcome == Outcome::Success {
                used as f64
            } else {
                cap as f64
            }
        };
        let frames = sorted(trials.iter().map(|t| censored(t, t.frames_used, budget_frames)));
        let steps = sorted(trials.iter().map(|t| censored(t, t.agent_steps_used, step_budget)));
        let scores = sorted(trials.iter().map(|t| t.final_score as f64));
        let median_frames = median(&frames);
        let median_agent_steps = median(&steps);
        Some(CaseAggregate {
            trials: n,
            successes,
            deaths: count(Outcome::Death),
            timeouts: count(Outcome::Timeout),
            success_rate: successes as f64 / n as f64,
            median_frames,
            median_agent_steps,
            reciprocal_median: 1.0 / median_frames,
            reciprocal_median_agent_steps: 1.0 / median_agent_steps,
            mean_score: scores.iter().sum::<f64>() / n as f64,
            max_score: trials.iter().map(|t| t.final_score).max().unwrap_or(0),
            median_score: median(&scores),
            p25_score: percentile(&scores, 0.25),
            p75_score: percentile(&scores, 0.75),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial(outcome: Outcome, frames: u64, score: u64) -> TrialResult {
        TrialResult {
            case_id: "c".into(),
            seed: 0,
            outcome,
            frames_used: frames,
            agent_steps_used: frames.div_ceil(4),
            final_score: score,
            serve: None,
        }
    }

    #[test]
    fn percentiles_interpolate() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(percentile(&xs, 0.0), 1.0);
        assert_eq!(percentile(&xs, 1.0), 4.0);
        assert_eq!(median(&xs), 2.5);
        assert_eq!(percentile(&xs, 0.25), 1.75);
        assert_eq!(percentile(&xs, 0.75), 3.25);
        assert_eq!(median(&[7.0]), 7.0);
    }

    #[test]
    fn failures_count_as_the_budget() {
        let trials = vec![
            trial(Outcome::Success, 80, 10),
            trial(Outcome::Death, 30, 0),
            trial(Outcome::Timeout, 400, 3),
        ];
        let a = CaseAggregate::from_trials(&trials, 400, 4).unwrap();
        // frames {80, 400, 400}
        assert_eq!(a.median_frames, 400.0);
        assert_eq!(a.reciprocal_median, 1.0 / 400.0);
        // steps {20, 100, 100}
        assert_eq!(a.median_agent_steps, 100.0);
        assert_eq!((a.successes, a.deaths, a.timeouts), (1, 1, 1));
        assert!((a.success_rate - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(a.max_score, 10);
        assert!((a.mean_score - 13.0 / 3.0).abs() < 1e-12);
        assert_eq!((a.p25_score, a.median_score, a.p75_score), (1.5, 3.0, 6.5));
    }

    #[test]
    fn fast_successes_reach_the_bright_end() {
        let trials: Vec<_> = (0..30).map(|_| trial(Outcome::Success, 80, 7)).collect();
        let a = CaseAggregate::from_trials(&trials, 14_400, 4).unwrap();
        assert_eq!(a.median_agent_steps, 20.0);
        assert_eq!(a.reciprocal_median_agent_steps, 1.0 / 20.0);
        assert_eq!(a.success_rate, 1.0);
    }

    #[test]
    fn empty_has_no_aggregate() {
        assert!(CaseAggregate::from_trials(&[], 10, 1).is_none());
    }

    proptest! {
        #[test]
        fn aggregate_bounds(raw in prop::collection::vec((0u8..3, 1u64..=500, 0u64..500), 1..40)) {
            let trials: Vec<_> = raw
                .iter()
                .map(|&(o, f, s)| {
                    let outcome = [Outcome::Success, Outcome::Death, Outcome::Timeout][o as usize];
                    trial(outcome, f, s)
                })
                .collect();
            let a = CaseAggregate::from_trials(&trials, 500, 4).unwrap();
            prop_assert!((0.0..=1.0).contains(&a.success_rate));
            prop_assert!(a.reciprocal_median > 0.0 && a.reciprocal_median <= 1.0);
            prop_assert!(a.p25_score <= a.median_score && a.median_score <= a.p75_score);
            prop_assert!(a.p75_score <= a.max_score as f64);
            prop_assert_eq!(a.successes + a.deaths + a.timeouts, a.trials);
            if trials.iter().all(|t| t.outcome != Outcome::Success) {
                prop_assert_eq!(a.reciprocal_median, 1.0 / 500.0);
            }
        }
    }
}

//! Period-by-period play against the threshold observer.
//!
//! The random guesser draws from ChaCha8 seeded with `seed_from_u64(seed)`.
//! Each period takes one `next_u64`, keeps the top 53 bits as a uniform `u` in
//! `[0, 1)`, and counts a hit when `u < p_true`. Trajectories record every
//! action, so replaying them needs no generator.

use alloc::vec::Vec;

use num_rational::Ratio;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::belief::{BeliefState, Threshold};
use crate::error::{Error, Result};
use crate::strategy::{Action, Strategy};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryRecord {
    pub period: u64,
    pub action: Action,
    /// Posterior mean after this period's outcome.
    pub posterior_mean: Ratio<u64>,
    /// The observer quits after this period.
    pub crossed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
    pub terminated: bool,
    pub termination_period: Option<u64>,
    /// Success in period `t` is worth `δ^(t−1)`.
    pub discounted_payoff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuesserConfig {
    pub p_true: f64,
    pub seed: u64,
}

impl GuesserConfig {
    pub fn new(p_true: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_true) {
            return Err(Error::ProbabilityOutOfRange(p_true));
        }
        Ok(Self { p_true, seed })
    }
}

fn check_common(prior: BeliefState, c: Threshold, delta: f64, max_periods: u64) -> Result<()> {
    if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if max_periods == 0 {
        return Err(Error::InvalidArgument("max_periods must be at least 1"));
    }
    if !prior.within_threshold(c) {
        return Err(Error::PriorAboveThreshold);
    }
    Ok(())
}

fn run(
    prior: BeliefState,
    c: Threshold,
    delta: f64,
    max_periods: u64,
    mut next_action: impl FnMut() -> Option<Action>,
) -> Trajectory {
    let mut state = prior;
    let mut records = Vec::new();
    let mut weight = 1.0;
    let mut payoff = 0.0;
    for period in 1..=max_periods {
        let Some(action) = next_action() else { break };
        state = state.update(action);
        if action.is_success() {
            payoff += weight;
        }
        weight *= delta;
        let crossed = !state.within_threshold(c);
        records.push(TrajectoryRecord {
            period,
            action,
            posterior_mean: state.posterior_mean(),
            crossed,
        });
        if crossed {
            return Trajectory {
                records,
                terminated: true,
                termination_period: Some(period),
                discounted_payoff: payoff,
            };
        }
    }
    Trajectory {
        records,
        terminated: false,
        termination_period: None,
        discounted_payoff: payoff,
    }
}

/// Plays `x` until the observer quits or `max_periods` have passed.
///
/// A finite strategy must cross exactly at its last action: crossing earlier
/// is rejected as infeasible, and never crossing as incomplete.
pub fn play_strategy(
    prior: BeliefState,
    c: Threshold,
    x: &Strategy,
    delta: f64,
    max_periods: u64,
) -> Result<Trajectory> {
    check_common(prior, c, delta, max_periods)?;
    if x.is_finite() {
        let mut state = prior;
        let n = x.prefix().len();
        for (i, &a) in x.prefix().iter().enumerate() {
            state = state.update(a);
            let crossed = !state.within_threshold(c);
            if crossed && i + 1 < n {
                return Err(Error::Infeasible { period: i + 1 });
            }
            if !crossed && i + 1 == n {
                return Err(Error::IncompleteStrategy);
            }
        }
    }
    let mut actions = x.actions();
    Ok(run(prior, c, delta, max_periods, || actions.next()))
}

/// Plays a memoryless guesser that hits with probability `p_true`.
pub fn play_guesser(
    prior: BeliefState,
    c: Threshold,
    g: GuesserConfig,
    delta: f64,
    max_periods: u64,
) -> Result<Trajectory> {
    check_common(prior, c, delta, max_periods)?;
    GuesserConfig::new(g.p_true, g.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    Ok(run(prior, c, delta, max_periods, || {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        Some(if u < g.p_true {
            Action::Success
        } else {
            Action::Failure
        })
    }))
}

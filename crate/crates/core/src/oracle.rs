//! Brute-force ground truth that never looks at the strategy family.
//!
//! Game semantics shared by every oracle: a failure always continues; a
//! success continues when the new posterior mean is at most `c` and otherwise
//! pays out and ends the game.
//!
//! The tree search and the dynamic program evaluate payoffs in the same nested
//! order `a₁ + δ·(a₂ + δ·(…))`. Floating-point rounding is monotone, so the
//! maximum over leaves equals the nested maximum bit for bit.

use alloc::vec;
use alloc::vec::Vec;

use crate::belief::{BeliefState, Threshold};
use crate::error::{Error, Result};
use crate::strategy::Action;

pub const EXHAUSTIVE_HORIZON_LIMIT: usize = 25;
pub const DP_HORIZON_LIMIT: usize = 500;
pub const SLACK_STATE_LIMIT: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    /// Lexicographically smallest optimal play (`s` before `f`).
    pub best_sequence: Vec<Action>,
    pub horizon: usize,
}

fn check_inputs(prior: BeliefState, c: Threshold, delta: f64) -> Result<()> {
    if !delta.is_finite() || !(0.0..1.0).contains(&delta) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if !prior.within_threshold(c) {
        return Err(Error::PriorAboveThreshold);
    }
    Ok(())
}

fn reward(a: Action) -> f64 {
    if a.is_success() {
        1.0
    } else {
        0.0
    }
}

/// Enumerates every play of at most `horizon` periods.
pub fn exhaustive_best(
    prior: BeliefState,
    c: Threshold,
    delta: f64,
    horizon: usize,
) -> Result<OracleResult> {
    check_inputs(prior, c, delta)?;
    if horizon > EXHAUSTIVE_HORIZON_LIMIT {
        return Err(Error::HorizonTooLarge {
            horizon,
            limit: EXHAUSTIVE_HORIZON_LIMIT,
        });
    }

    struct Search {
        c: Threshold,
        delta: f64,
        horizon: usize,
        path: Vec<Action>,
        best: f64,
        best_path: Vec<Action>,
    }

    impl Search {
        fn leaf(&mut self) {
            let value = self
                .path
                .iter()
                .rev()
                .fold(0.0, |acc, &a| reward(a) + self.delta * acc);
            if value > self.best {
                self.best = value;
                self.best_path.clone_from(&self.path);
            }
        }

        fn descend(&mut self, state: BeliefState) {
            if self.path.len() == self.horizon {
                self.leaf();
                return;
            }
            for a in [Action::Success, Action::Failure] {
                let next = state.update(a);
                self.path.push(a);
                if next.within_threshold(self.c) {
                    self.descend(next);
                } else {
                    self.leaf();
                }
                self.path.pop();
            }
        }
    }

    let mut search = Search {
        c,
        delta,
        horizon,
        path: Vec::with_capacity(horizon),
        best: f64::NEG_INFINITY,
        best_path: Vec::new(),
    };
    search.descend(prior);
    Ok(OracleResult {
        value: search.best,
        best_sequence: search.best_path,
        horizon,
    })
}

/// Backward induction over `(successes, failures)` with `horizon` periods.
pub fn dp_best(
    prior: BeliefState,
    c: Threshold,
    delta: f64,
    horizon: usize,
) -> Result<OracleResult> {
    check_inputs(prior, c, delta)?;
    if horizon > DP_HORIZON_LIMIT {
        return Err(Error::HorizonTooLarge {
            horizon,
            limit: DP_HORIZON_LIMIT,
        });
    }
    // states after t periods sit at offset t(t+1)/2, indexed by success count
    let offset = |t: usize| t * (t + 1) / 2;
    let mut table = vec![0.0f64; offset(horizon + 1)];
    let state_at = |s: usize, f: usize| BeliefState {
        successes: prior.successes + s as u64,
        failures: prior.failures + f as u64,
        ..prior
    };
    let branches = |table: &[f64], t: usize, s: usize| -> (f64, f64) {
        let f = t - s;
        let on_success = if state_at(s + 1, f).within_threshold(c) {
            1.0 + delta * table[offset(t + 1) + s + 1]
        } else {
            1.0
        };
        let on_failure = delta * table[offset(t + 1) + s];
        (on_success, on_failure)
    };

    for t in (0..horizon).rev() {
        for s in 0..=t {
            let (on_success, on_failure) = branches(&table, t, s);
            table[offset(t) + s] = on_success.max(on_failure);
        }
    }

    let mut best_sequence = Vec::new();
    let mut s = 0;
    for t in 0..horizon {
        let (on_success, on_failure) = branches(&table, t, s);
        if on_success >= on_failure {
            best_sequence.push(Action::Success);
            if !state_at(s + 1, t - s).within_threshold(c) {
                break;
            }
            s += 1;
        } else {
            best_sequence.push(Action::Failure);
        }
    }
    Ok(OracleResult {
        value: table[0],
        best_sequence,
        horizon,
    })
}

pub fn dp_value(prior: BeliefState, c: Threshold, delta: f64, horizon: usize) -> Result<f64> {
    dp_best(prior, c, delta, horizon).map(|r| r.value)
}

/// Smallest slack cap that leaves optimal values unchanged: large enough for
/// the prior, and for the slack reached by a failure taken while the next
/// success would cross.
pub fn slack_cap(prior: BeliefState, c: Threshold) -> i128 {
    prior.slack(c).max(i128::from(c.den()) - 1)
}

fn slack_states(prior: BeliefState, c: Threshold, cap: i128) -> Result<usize> {
    if cap < prior.slack(c) {
        return Err(Error::InvalidArgument("slack cap below the prior's slack"));
    }
    let states = (cap + 1) as u128;
    if states > SLACK_STATE_LIMIT {
        return Err(Error::StateSpaceTooLarge {
            states,
            limit: SLACK_STATE_LIMIT,
        });
    }
    Ok(states as usize)
}

/// Bellman update on slack levels `0..=cap`, clamping failures at the cap.
fn bellman(values: &[f64], next: &mut [f64], c: Threshold, delta: f64) {
    let cost = c.success_cost() as usize;
    let gain = c.failure_gain() as usize;
    let cap = values.len() - 1;
    for (slack, out) in next.iter_mut().enumerate() {
        let on_success = if slack >= cost {
            1.0 + delta * values[slack - cost]
        } else {
            1.0
        };
        let on_failure = delta * values[(slack + gain).min(cap)];
        *out = on_success.max(on_failure);
    }
}

/// Finite-horizon value on the slack abstraction with failures clamped at
/// `cap`. Any `cap ≥ slack_cap(prior, c)` reproduces [`dp_value`].
pub fn dp_value_capped(
    prior: BeliefState,
    c: Threshold,
    delta: f64,
    horizon: usize,
    cap: i128,
) -> Result<f64> {
    check_inputs(prior, c, delta)?;
    let n = slack_states(prior, c, cap)?;
    let mut values = vec![0.0; n];
    let mut next = vec![0.0; n];
    for _ in 0..horizon {
        bellman(&values, &mut next, c, delta);
        core::mem::swap(&mut values, &mut next);
    }
    Ok(values[prior.slack(c) as usize])
}

/// Infinite-horizon value from the prior. Iterates until the sup-norm change
/// drops to `tol·(1−δ)`.
pub fn value_iteration(prior: BeliefState, c: Threshold, delta: f64, tol: f64) -> Result<f64> {
    check_inputs(prior, c, delta)?;
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::DeltaOutOfRange(delta));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    let n = slack_states(prior, c, slack_cap(prior, c))?;
    let mut values = vec![0.0; n];
    let mut next = vec![0.0; n];
    let stop = tol * (1.0 - delta);
    loop {
        bellman(&values, &mut next, c, delta);
        let change = values
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        core::mem::swap(&mut values, &mut next);
        if change <= stop {
            break;
        }
    }
    Ok(values[prior.slack(c) as usize])
}

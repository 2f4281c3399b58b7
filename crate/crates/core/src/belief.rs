//! The observer's Beta-Bernoulli posterior and the threshold test that ends
//! the game.
//!
//! Everything here is integer arithmetic. States whose posterior mean sits
//! exactly on the threshold decide the whole strategy structure, so no
//! comparison ever goes through floating point.

use core::fmt;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::strategy::Action;

/// Suspicion cutoff `c = num/den`, kept in lowest terms with `0 < c < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Threshold {
    num: u64,
    den: u64,
}

impl Threshold {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num >= den {
            return Err(Error::InvalidThreshold { num, den });
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    /// `c = 1/(m+1)`.
    pub fn unit(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidM);
        }
        let den = m.checked_add(1).ok_or(Error::InvalidM)?;
        Self::new(1, den)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// Returns `m` when the threshold has the form `1/(m+1)`.
    pub fn unit_m(&self) -> Option<u64> {
        (self.num == 1).then(|| self.den - 1)
    }

    pub fn as_ratio(&self) -> Ratio<u64> {
        Ratio::new_raw(self.num, self.den)
    }

    /// Slack consumed by one success.
    pub(crate) fn success_cost(&self) -> i128 {
        i128::from(self.den - self.num)
    }

    /// Slack gained by one failure.
    pub(crate) fn failure_gain(&self) -> i128 {
        i128::from(self.num)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Posterior `Beta(alpha0 + successes, beta0 + failures)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BeliefState {
    pub alpha0: u64,
    pub beta0: u64,
    pub successes: u64,
    pub failures: u64,
}

impl BeliefState {
    /// The prior, with no observations yet.
    pub fn new(alpha0: u64, beta0: u64) -> Result<Self> {
        Self::with_counts(alpha0, beta0, 0, 0)
    }

    pub fn with_counts(alpha0: u64, beta0: u64, successes: u64, failures: u64) -> Result<Self> {
        if alpha0 == 0 || beta0 == 0 {
            return Err(Error::InvalidPrior {
                alpha: alpha0,
                beta: beta0,
            });
        }
        Ok(Self {
            alpha0,
            beta0,
            successes,
            failures,
        })
    }

    pub fn alpha(&self) -> u64 {
        self.alpha0 + self.successes
    }

    pub fn beta(&self) -> u64 {
        self.beta0 + self.failures
    }

    /// `(alpha0 + successes) / (alpha0 + successes + beta0 + failures)`.
    pub fn posterior_mean(&self) -> Ratio<u64> {
        Ratio::new(self.alpha(), self.alpha() + self.beta())
    }

    #[must_use]
    pub fn update(self, outcome: Action) -> Self {
        match outcome {
            Action::Success => Self {
                successes: self.successes + 1,
                ..self
            },
            Action::Failure => Self {
                failures: self.failures + 1,
                ..self
            },
        }
    }

    /// Integer margin `num·β' − (den−num)·α'` to the feasibility boundary.
    /// Nonnegative exactly when the posterior mean is at most `c`.
    pub fn slack(&self, c: Threshold) -> i128 {
        c.failure_gain() * i128::from(self.beta()) - c.success_cost() * i128::from(self.alpha())
    }

    /// `posterior_mean ≤ c`. A mean equal to `c` keeps the game alive.
    pub fn within_threshold(&self, c: Threshold) -> bool {
        let a = u128::from(self.alpha());
        let total = a + u128::from(self.beta());
        a * u128::from(c.den) <= u128::from(c.num) * total
    }

    /// Smallest number of failures after which one more success still keeps
    /// the mean at or below `c`.
    pub fn min_failures_for_next_success(&self, c: Threshold) -> u64 {
        failures_to_cover(self.slack(c), c)
    }
}

/// Failures needed before a success is affordable from the given slack.
pub(crate) fn failures_to_cover(slack: i128, c: Threshold) -> u64 {
    let deficit = c.success_cost() - slack;
    if deficit <= 0 {
        0
    } else {
        let gain = c.failure_gain();
        u64::try_from((deficit + gain - 1) / gain).expect("failure count fits in u64")
    }
}

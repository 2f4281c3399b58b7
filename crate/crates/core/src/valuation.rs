//! Discounted payoffs and the regime boundaries `z_n`.
//!
//! Each success pays one unit. A success in period `i` (1-based) is worth
//! `δ^(i−1)`, so the first period is undiscounted. Shifting every exponent by
//! one multiplies all payoffs by `δ` and leaves every comparison unchanged.

use crate::error::{Error, Result};
use crate::strategy::{decompose, Decomposition, FamilyIndex, Strategy};

/// Default bisection tolerance for [`z_threshold`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// Discount factor in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Discount(f64);

impl Discount {
    pub fn new(delta: f64) -> Result<Self> {
        if delta.is_finite() && (0.0..1.0).contains(&delta) {
            Ok(Self(delta))
        } else {
            Err(Error::DeltaOutOfRange(delta))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub n: u32,
    pub z: f64,
    /// `z^n + z^(n+1) − 1`.
    pub residual: f64,
}

pub(crate) fn powu(x: f64, e: u64) -> f64 {
    num_traits::pow(x, e as usize)
}

/// Present value of a strategy. Finite strategies accept `δ = 1` (plain
/// success count); infinite ones need `δ < 1` and are summed in closed form.
pub fn payoff(x: &Strategy, delta: f64) -> Result<f64> {
    if !delta.is_finite() || !(0.0..=1.0).contains(&delta) {
        return Err(Error::DeltaOutOfRange(delta));
    }
    let (head, mut weight) = discounted_successes(x.prefix(), delta);
    let Some(cycle) = x.cycle() else {
        return Ok(head);
    };
    if delta >= 1.0 {
        return Err(Error::InfiniteAtUnitDiscount(delta));
    }
    let (per_cycle, cycle_factor) = discounted_successes(cycle, delta);
    // `weight` is now δ^L for the prefix length L
    weight *= per_cycle / (1.0 - cycle_factor);
    Ok(head + weight)
}

/// Sum of `δ^(i−1)` over success positions, and `δ^len`.
fn discounted_successes(actions: &[crate::Action], delta: f64) -> (f64, f64) {
    let mut weight = 1.0;
    let mut total = 0.0;
    for a in actions {
        if a.is_success() {
            total += weight;
        }
        weight *= delta;
    }
    (total, weight)
}

fn gap(x: f64, n: u64) -> f64 {
    powu(x, n) * (1.0 + x) - 1.0
}

/// Unique root in `(0, 1)` of `x^n + x^(n+1) = 1`, by bisection on `[0, 1]`.
///
/// Stops once the bracket is no wider than `tol` and the residual is no larger
/// than `tol`, or when the bracket cannot shrink any further in `f64`.
pub fn z_threshold(n: u32, tol: f64) -> Result<RootResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("z_n needs n >= 1"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidTolerance(tol));
    }
    let e = u64::from(n);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let (mut f_lo, mut f_hi) = (-1.0f64, 1.0f64);
    loop {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = gap(mid, e);
        if f_mid == 0.0 {
            return Ok(RootResult {
                n,
                z: mid,
                residual: 0.0,
            });
        }
        if f_mid < 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        if hi - lo <= tol && f_lo.abs().min(f_hi.abs()) <= tol {
            break;
        }
    }
    let (z, residual) = if f_lo.abs() <= f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    Ok(RootResult { n, z, residual })
}

/// Closed-form payoff of `h^i` / `h^∞` for `c = 1/(m+1)`.
///
/// With `q = r − α` free initial successes and the first boundary success at
/// period `P = q + (m−k) + 1`, every later success costs `m+1` periods.
pub fn h_payoff_closed_form(
    alpha0: u64,
    beta0: u64,
    m: u64,
    idx: FamilyIndex,
    delta: f64,
) -> Result<f64> {
    let d = Discount::new(delta)?.value();
    if alpha0 == 0 || beta0 == 0 {
        return Err(Error::InvalidPrior {
            alpha: alpha0,
            beta: beta0,
        });
    }
    let Decomposition { r, k, .. } = decompose(beta0, m)?;
    if r < alpha0 {
        return Err(Error::PriorAboveThreshold);
    }
    let q = r - alpha0;
    let p = q + (m - k) + 1;
    let free = (1.0 - powu(d, q)) / (1.0 - d);
    let period = m + 1;
    match idx {
        FamilyIndex::Finite(0) => Err(Error::InvalidArgument("family index starts at 1")),
        FamilyIndex::Finite(1) => Ok((1.0 - powu(d, q + 1)) / (1.0 - d)),
        FamilyIndex::Finite(i) => {
            let reps = u64::from(i) - 1;
            let boundary =
                powu(d, p - 1) * (1.0 - powu(d, period * reps)) / (1.0 - powu(d, period));
            let last = powu(d, p + period * (reps - 1));
            Ok(free + boundary + last)
        }
        FamilyIndex::Infinite => Ok(free + powu(d, p - 1) / (1.0 - powu(d, period))),
    }
}

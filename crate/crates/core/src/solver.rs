//! Which family member is optimal, as a function of the discount factor, for
//! thresholds of the form `c = 1/(m+1)`.
//!
//! Write `β = m·r + k`. Below `z_{m−k}` the player grabs every success at once
//! (`h^1`). Between `z_{m−k}` and `z_m` he sits out `m−k` failures once to
//! collect two more successes (`h^2`). Above `z_m` he never lets the observer
//! leave (`h^∞`). At the two boundaries the neighbouring members tie; when
//! `k = 0` both boundaries coincide and every member ties.

use alloc::vec::Vec;

use crate::belief::{BeliefState, Threshold};
use crate::error::{Error, Result};
use crate::strategy::{decompose, h_family, Decomposition, FamilyIndex};
use crate::valuation::{h_payoff_closed_form, payoff, z_threshold, Discount, DEFAULT_ROOT_TOL};

pub const DEFAULT_TIE_TOL: f64 = 1e-9;

/// Payoffs closer than this count as equal in [`verify_ordering`].
pub const ARGMAX_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemInstance {
    pub alpha0: u64,
    pub beta0: u64,
    pub m: u64,
    pub delta: f64,
}

impl ProblemInstance {
    pub fn new(alpha0: u64, beta0: u64, m: u64, delta: f64) -> Result<Self> {
        if alpha0 == 0 || beta0 == 0 {
            return Err(Error::InvalidPrior {
                alpha: alpha0,
                beta: beta0,
            });
        }
        if m == 0 {
            return Err(Error::InvalidM);
        }
        if Discount::new(delta)?.value() <= 0.0 {
            return Err(Error::DeltaOutOfRange(delta));
        }
        let prior = BeliefState::new(alpha0, beta0)?;
        if !prior.within_threshold(Threshold::unit(m)?) {
            return Err(Error::PriorAboveThreshold);
        }
        Ok(Self {
            alpha0,
            beta0,
            m,
            delta,
        })
    }

    /// Accepts a general rational threshold but only solves `c = 1/(m+1)`.
    pub fn with_threshold(alpha0: u64, beta0: u64, c: Threshold, delta: f64) -> Result<Self> {
        let m = c.unit_m().ok_or(Error::NotUnitThreshold {
            num: c.num(),
            den: c.den(),
        })?;
        Self::new(alpha0, beta0, m, delta)
    }

    pub fn prior(&self) -> BeliefState {
        BeliefState {
            alpha0: self.alpha0,
            beta0: self.beta0,
            successes: 0,
            failures: 0,
        }
    }

    pub fn threshold(&self) -> Threshold {
        Threshold::unit(self.m).expect("m validated at construction")
    }

    pub fn decomposition(&self) -> Decomposition {
        decompose(self.beta0, self.m).expect("m validated at construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimalKind {
    /// A single member is optimal.
    Unique(FamilyIndex),
    /// `δ = z_{m−k}`, `k ≥ 1`: `h^1` and `h^2` tie.
    TieLow,
    /// `δ = z_m`, `k ≥ 1`: `h^2, h^3, …, h^∞` tie.
    TieHigh,
    /// `δ = z_m`, `k = 0`: every member ties.
    TieAll,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalSet {
    pub kind: OptimalKind,
    /// `z_{m−k}`; equals `z_high` when `k = 0`.
    pub z_low: f64,
    /// `z_m`.
    pub z_high: f64,
    /// Closed-form payoffs of [`OptimalSet::representatives`].
    pub payoffs: Vec<(FamilyIndex, f64)>,
}

impl OptimalSet {
    pub fn contains(&self, idx: FamilyIndex) -> bool {
        use FamilyIndex::{Finite, Infinite};
        match self.kind {
            OptimalKind::Unique(only) => idx == only,
            OptimalKind::TieLow => matches!(idx, Finite(1) | Finite(2)),
            OptimalKind::TieHigh => matches!(idx, Finite(2..) | Infinite),
            OptimalKind::TieAll => true,
        }
    }

    /// Finite listing of the member set. Open-ended ties list their first
    /// members and `h^∞`; every finite index in between is also optimal.
    pub fn representatives(&self) -> Vec<FamilyIndex> {
        use FamilyIndex::{Finite, Infinite};
        match self.kind {
            OptimalKind::Unique(only) => alloc::vec![only],
            OptimalKind::TieLow => alloc::vec![Finite(1), Finite(2)],
            OptimalKind::TieHigh => alloc::vec![Finite(2), Finite(3), Infinite],
            OptimalKind::TieAll => alloc::vec![Finite(1), Finite(2), Finite(3), Infinite],
        }
    }

    pub fn is_open_ended(&self) -> bool {
        matches!(self.kind, OptimalKind::TieHigh | OptimalKind::TieAll)
    }

    pub fn best_payoff(&self) -> f64 {
        self.payoffs
            .iter()
            .map(|&(_, v)| v)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `(z_low, z_high)` for the instance.
pub fn regime_bounds(inst: &ProblemInstance) -> Result<(f64, f64)> {
    let Decomposition { m, k, .. } = inst.decomposition();
    let to_u32 = |n: u64| u32::try_from(n).map_err(|_| Error::InvalidArgument("m too large"));
    let z_high = z_threshold(to_u32(m)?, DEFAULT_ROOT_TOL)?.z;
    let z_low = if k == 0 {
        z_high
    } else {
        z_threshold(to_u32(m - k)?, DEFAULT_ROOT_TOL)?.z
    };
    Ok((z_low, z_high))
}

pub fn classify(inst: &ProblemInstance, tie_tol: f64) -> Result<OptimalSet> {
    if tie_tol.is_nan() || tie_tol <= 0.0 {
        return Err(Error::InvalidTolerance(tie_tol));
    }
    let (z_low, z_high) = regime_bounds(inst)?;
    let k = inst.decomposition().k;
    let d = inst.delta;

    let kind = if (d - z_high).abs() <= tie_tol {
        if k == 0 {
            OptimalKind::TieAll
        } else {
            OptimalKind::TieHigh
        }
    } else if d > z_high {
        OptimalKind::Unique(FamilyIndex::Infinite)
    } else if k >= 1 && (d - z_low).abs() <= tie_tol {
        OptimalKind::TieLow
    } else if k >= 1 && d > z_low {
        OptimalKind::Unique(FamilyIndex::Finite(2))
    } else {
        OptimalKind::Unique(FamilyIndex::Finite(1))
    };

    let mut set = OptimalSet {
        kind,
        z_low,
        z_high,
        payoffs: Vec::new(),
    };
    for idx in set.representatives() {
        let v = h_payoff_closed_form(inst.alpha0, inst.beta0, inst.m, idx, d)?;
        set.payoffs.push((idx, v));
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderingReport {
    /// Direct payoffs of `h^1..h^N` and `h^∞`.
    pub payoffs: Vec<(FamilyIndex, f64)>,
    /// Members within [`ARGMAX_TOL`] of the best payoff.
    pub argmax: Vec<FamilyIndex>,
    pub agrees: bool,
}

/// Cross-checks [`classify`] by generating `h^1..h^N`, `h^∞` and comparing
/// their payoffs directly.
///
/// Agreement means every classified member that was evaluated is in the
/// argmax, and nothing outside the classified set is, except that when `h^∞`
/// is optimal the late finite members `h^3, h^4, …` may come within the
/// tolerance of it.
pub fn verify_ordering(inst: &ProblemInstance, n: u32) -> Result<OrderingReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("verify_ordering needs N >= 2"));
    }
    let prior = inst.prior();
    let c = inst.threshold();
    let mut payoffs = Vec::with_capacity(n as usize + 1);
    for idx in (1..=n)
        .map(FamilyIndex::Finite)
        .chain([FamilyIndex::Infinite])
    {
        let h = h_family(prior, c, idx)?;
        payoffs.push((idx, payoff(&h, inst.delta)?));
    }
    let best = payoffs
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let argmax: Vec<FamilyIndex> = payoffs
        .iter()
        .filter(|&&(_, v)| best - v <= ARGMAX_TOL)
        .map(|&(i, _)| i)
        .collect();

    let classified = classify(inst, DEFAULT_TIE_TOL)?;
    let infinite_optimal = classified.contains(FamilyIndex::Infinite);
    let allowed = |idx: FamilyIndex| {
        classified.contains(idx) || (infinite_optimal && matches!(idx, FamilyIndex::Finite(3..)))
    };
    let agrees = payoffs
        .iter()
        .all(|&(idx, _)| !classified.contains(idx) || argmax.contains(&idx))
        && argmax.iter().all(|&idx| allowed(idx));
    Ok(OrderingReport {
        payoffs,
        argmax,
        agrees,
    })
}

/// One row of a discount sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub delta: f64,
    pub kind: OptimalKind,
    pub best_payoff: f64,
    pub z_low: f64,
    pub z_high: f64,
}

impl SweepRow {
    /// `h1`, `h2`, `hinf` or `tie`.
    pub fn label(&self) -> &'static str {
        match self.kind {
            OptimalKind::Unique(FamilyIndex::Finite(1)) => "h1",
            OptimalKind::Unique(FamilyIndex::Finite(2)) => "h2",
            OptimalKind::Unique(FamilyIndex::Infinite) => "hinf",
            OptimalKind::Unique(FamilyIndex::Finite(_)) => {
                unreachable!("classify only returns h1, h2 or hinf")
            }
            OptimalKind::TieLow | OptimalKind::TieHigh | OptimalKind::TieAll => "tie",
        }
    }
}

/// The discount grid `min, min+step, …` up to `max`, computed as
/// `min + i·step` so rounding does not accumulate.
pub fn delta_grid(delta_min: f64, delta_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(delta_min > 0.0 && delta_min < delta_max && delta_max < 1.0) {
        return Err(Error::InvalidArgument("need 0 < delta-min < delta-max < 1"));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidArgument("step must be positive"));
    }
    let mut grid = Vec::new();
    let mut i = 0u32;
    loop {
        let d = delta_min + f64::from(i) * step;
        if d > delta_max + 1e-12 {
            break;
        }
        grid.push(d.min(delta_max));
        i += 1;
    }
    Ok(grid)
}

/// Classifies every point of [`delta_grid`], in ascending order.
pub fn sweep(
    alpha0: u64,
    beta0: u64,
    m: u64,
    deltas: &[f64],
    tie_tol: f64,
) -> Result<Vec<SweepRow>> {
    deltas
        .iter()
        .map(|&delta| {
            let set = classify(&ProblemInstance::new(alpha0, beta0, m, delta)?, tie_tol)?;
            Ok(SweepRow {
                delta,
                kind: set.kind,
                best_payoff: set.best_payoff(),
                z_low: set.z_low,
                z_high: set.z_high,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use FamilyIndex::{Finite, Infinite};

    fn inst(a: u64, b: u64, m: u64, d: f64) -> ProblemInstance {
        ProblemInstance::new(a, b, m, d).unwrap()
    }

    #[test]
    fn classify_examples() {
        let low = classify(&inst(1, 3, 1, 0.5), DEFAULT_TIE_TOL).unwrap();
        assert_eq!(low.kind, OptimalKind::Unique(Finite(1)));
        assert!((low.z_high - 0.6180339887).abs() < 1e-10);
        assert_eq!(low.z_low, low.z_high);

        let high = classify(&inst(1, 3, 1, 0.7), DEFAULT_TIE_TOL).unwrap();
        assert_eq!(high.kind, OptimalKind::Unique(Infinite));

        let mid = classify(&inst(1, 5, 2, 0.7), DEFAULT_TIE_TOL).unwrap();
        assert_eq!(mid.kind, OptimalKind::Unique(Finite(2)));
        assert!(mid.z_low < 0.7 && 0.7 < mid.z_high);

        let z1 = z_threshold(1, DEFAULT_ROOT_TOL).unwrap().z;
        let tie = classify(&inst(1, 3, 1, z1), DEFAULT_TIE_TOL).unwrap();
        assert_eq!(tie.kind, OptimalKind::TieAll);
        let vals: Vec<f64> = tie.payoffs.iter().map(|&(_, v)| v).collect();
        assert!(vals.iter().all(|v| (v - vals[0]).abs() < 1e-10));
    }

    #[test]
    fn tie_kinds_when_k_positive() {
        let z1 = z_threshold(1, DEFAULT_ROOT_TOL).unwrap().z;
        let z2 = z_threshold(2, DEFAULT_ROOT_TOL).unwrap().z;
        let low = classify(&inst(1, 5, 2, z1), DEFAULT_TIE_TOL).unwrap();
        assert_eq!(low.kind, OptimalKind::TieLow);
        assert!(low.contains(Finite(1)) && low.contains(Finite(2)) && !low.contains(Infinite));
        let high = classify(&inst(1, 5, 2, z2), DEFAULT_TIE_TOL).unwrap();
        assert_eq!(high.kind, OptimalKind::TieHigh);
        assert!(!high.contains(Finite(1)) && high.contains(Finite(7)) && high.contains(Infinite));
        assert!(high.is_open_ended());
    }

    #[test]
    fn sweep_transitions() {
        let grid = delta_grid(0.05, 0.95, 0.05).unwrap();
        assert_eq!(grid.len(), 19);
        assert!((grid[18] - 0.95).abs() < 1e-12);
        let labels = |a, b, m| -> Vec<&'static str> {
            sweep(a, b, m, &grid, DEFAULT_TIE_TOL)
                .unwrap()
                .iter()
                .map(SweepRow::label)
                .collect()
        };
        let l = labels(1, 3, 1);
        assert_eq!(l[..12], ["h1"; 12]);
        assert_eq!(l[12..], ["hinf"; 7]);
        let l = labels(1, 5, 2);
        assert_eq!(l[..12], ["h1"; 12]);
        assert_eq!(l[12..15], ["h2"; 3]);
        assert_eq!(l[15..], ["hinf"; 4]);
        assert!(delta_grid(0.5, 0.5, 0.1).is_err());
        assert!(delta_grid(0.0, 0.5, 0.1).is_err());
        assert!(delta_grid(0.1, 0.5, 0.0).is_err());
        assert!(delta_grid(0.1, 1.0, 0.1).is_err());
    }

    #[test]
    fn instance_validation() {
        assert_eq!(
            ProblemInstance::new(3, 1, 1, 0.5),
            Err(Error::PriorAboveThreshold)
        );
        assert_eq!(
            ProblemInstance::new(1, 3, 1, 0.0),
            Err(Error::DeltaOutOfRange(0.0))
        );
        assert_eq!(
            ProblemInstance::new(1, 3, 1, 1.0),
            Err(Error::DeltaOutOfRange(1.0))
        );
        assert_eq!(ProblemInstance::new(1, 3, 0, 0.5), Err(Error::InvalidM));
        let c = Threshold::new(2, 5).unwrap();
        assert_eq!(
            ProblemInstance::with_threshold(1, 3, c, 0.5),
            Err(Error::NotUnitThreshold { num: 2, den: 5 })
        );
        assert_eq!(
            ProblemInstance::with_threshold(1, 3, Threshold::new(2, 4).unwrap(), 0.5)
                .unwrap()
                .m,
            1
        );
        assert!(classify(&inst(1, 3, 1, 0.5), 0.0).is_err());
    }

    #[test]
    fn verify_ordering_examples() {
        let r = verify_ordering(&inst(1, 3, 1, 0.5), 20).unwrap();
        assert_eq!(r.argmax, [Finite(1)]);
        assert!(r.agrees);
        let r = verify_ordering(&inst(1, 5, 2, 0.7), 20).unwrap();
        assert_eq!(r.argmax, [Finite(2)]);
        assert!(r.agrees);
        let r = verify_ordering(&inst(1, 3, 1, 0.9), 20).unwrap();
        assert_eq!(r.argmax, [Infinite]);
        assert!(r.agrees);
        assert!(verify_ordering(&inst(1, 3, 1, 0.9), 1).is_err());
    }

    fn grid() -> impl Iterator<Item = (u64, u64, u64)> {
        (1..=4u64).flat_map(|a| {
            (1..=4u64).flat_map(move |b| {
                (1..=3u64).filter_map(move |m| (a * m <= b).then_some((a, b, m)))
            })
        })
    }

    #[test]
    fn regimes_progress_h1_h2_hinf() {
        for (a, b, m) in grid() {
            let mut labels: Vec<FamilyIndex> = Vec::new();
            for step in 1..=499 {
                let d = f64::from(step) * 0.002;
                if let OptimalKind::Unique(idx) =
                    classify(&inst(a, b, m, d), DEFAULT_TIE_TOL).unwrap().kind
                {
                    if labels.last() != Some(&idx) {
                        labels.push(idx);
                    }
                }
            }
            let k = decompose(b, m).unwrap().k;
            let expected: &[FamilyIndex] = if k == 0 {
                &[Finite(1), Infinite]
            } else {
                &[Finite(1), Finite(2), Infinite]
            };
            assert_eq!(labels, expected, "{a} {b} {m}");
        }
    }

    #[test]
    fn classification_matches_direct_ordering() {
        for (a, b, m) in grid() {
            let i = inst(a, b, m, 0.5);
            let (zl, zh) = regime_bounds(&i).unwrap();
            for step in 1..=49 {
                let d = f64::from(step) * 0.02;
                if (d - zl).abs() <= 0.01 || (d - zh).abs() <= 0.01 {
                    continue;
                }
                let report = verify_ordering(&inst(a, b, m, d), 40).unwrap();
                assert!(report.agrees, "{a} {b} {m} {d}: {:?}", report.argmax);
            }
        }
    }

    #[test]
    fn ties_are_payoff_equalities() {
        for (a, b, m) in grid() {
            let k = decompose(b, m).unwrap().k;
            let h = |idx, d| h_payoff_closed_form(a, b, m, idx, d).unwrap();
            if k >= 1 {
                let zl = z_threshold((m - k) as u32, DEFAULT_ROOT_TOL).unwrap().z;
                assert!((h(Finite(1), zl) - h(Finite(2), zl)).abs() <= 1e-9);
                let r = verify_ordering(&inst(a, b, m, zl), 10).unwrap();
                assert!(r.agrees, "{a} {b} {m}: {:?}", r.argmax);
            }
            let zh = z_threshold(m as u32, DEFAULT_ROOT_TOL).unwrap().z;
            for i in 2..=10 {
                assert!((h(Finite(i), zh) - h(Finite(i + 1), zh)).abs() <= 1e-9);
            }
            assert!((h(Finite(2), zh) - h(Infinite, zh)).abs() <= 1e-9);
            let r = verify_ordering(&inst(a, b, m, zh), 10).unwrap();
            assert!(r.agrees, "{a} {b} {m}: {:?}", r.argmax);
        }
    }
}

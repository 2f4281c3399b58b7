//! Action sequences, their feasibility, and the candidate-optimal family
//! `h^1, h^2, …, h^∞`.
//!
//! A strategy is feasible when the observer's posterior mean stays at or below
//! `c` after every action except possibly the last one; that last action may be
//! the success that ends the game. Feasibility is tracked through the integer
//! slack `num·β' − (den−num)·α'`, which a success lowers by `den−num` and a
//! failure raises by `num`.
//!
//! Text form: a finite strategy is written `[sf]+`, an eventually periodic one
//! `PREFIX(CYCLE)*` with a possibly empty prefix.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::belief::{failures_to_cover, BeliefState, Threshold};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Success,
    Failure,
}

impl Action {
    pub fn symbol(self) -> char {
        match self {
            Action::Success => 's',
            Action::Failure => 'f',
        }
    }

    pub fn from_symbol(ch: char) -> Option<Self> {
        match ch {
            's' => Some(Action::Success),
            'f' => Some(Action::Failure),
            _ => None,
        }
    }

    pub fn is_success(self) -> bool {
        self == Action::Success
    }
}

/// A finite action tuple, or `prefix` followed by `cycle` repeated forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Strategy {
    prefix: Vec<Action>,
    cycle: Option<Vec<Action>>,
}

impl Strategy {
    pub fn finite(actions: Vec<Action>) -> Result<Self> {
        if actions.is_empty() {
            return Err(Error::EmptyStrategy);
        }
        Ok(Self {
            prefix: actions,
            cycle: None,
        })
    }

    pub fn periodic(prefix: Vec<Action>, cycle: Vec<Action>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyStrategy);
        }
        Ok(Self {
            prefix,
            cycle: Some(cycle),
        })
    }

    pub fn prefix(&self) -> &[Action] {
        &self.prefix
    }

    pub fn cycle(&self) -> Option<&[Action]> {
        self.cycle.as_deref()
    }

    pub fn is_finite(&self) -> bool {
        self.cycle.is_none()
    }

    /// Number of periods, `None` for infinite strategies.
    pub fn len(&self) -> Option<usize> {
        self.is_finite().then_some(self.prefix.len())
    }

    /// True only for the empty finite strategy.
    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Success count of a finite strategy.
    pub fn successes(&self) -> Option<usize> {
        self.is_finite()
            .then(|| self.prefix.iter().filter(|a| a.is_success()).count())
    }

    /// Every action in play order; endless for infinite strategies.
    pub fn actions(&self) -> impl Iterator<Item = Action> + '_ {
        let cycle: &[Action] = self.cycle.as_deref().unwrap_or(&[]);
        self.prefix
            .iter()
            .copied()
            .chain(cycle.iter().copied().cycle())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.prefix.len() + 8);
        out.extend(self.prefix.iter().map(|a| a.symbol()));
        if let Some(cycle) = &self.cycle {
            out.push('(');
            out.extend(cycle.iter().map(|a| a.symbol()));
            out.push_str(")*");
        }
        out
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// Positions in parse errors are 1-based character offsets.
    fn from_str(text: &str) -> Result<Self> {
        let mut prefix = Vec::new();
        let mut chars = text.chars().enumerate();
        let mut open = None;
        for (i, ch) in chars.by_ref() {
            match ch {
                '(' => {
                    open = Some(i);
                    break;
                }
                _ => match Action::from_symbol(ch) {
                    Some(a) => prefix.push(a),
                    None => {
                        return Err(Error::Parse {
                            position: i + 1,
                            reason: "expected 's', 'f' or '('",
                        })
                    }
                },
            }
        }
        let Some(open) = open else {
            if prefix.is_empty() {
                return Err(Error::Parse {
                    position: 1,
                    reason: "empty strategy",
                });
            }
            return Strategy::finite(prefix);
        };

        let mut cycle = Vec::new();
        let mut closed = false;
        for (i, ch) in chars.by_ref() {
            if ch == ')' {
                if cycle.is_empty() {
                    return Err(Error::Parse {
                        position: i + 1,
                        reason: "empty cycle",
                    });
                }
                closed = true;
                break;
            }
            match Action::from_symbol(ch) {
                Some(a) => cycle.push(a),
                None => {
                    return Err(Error::Parse {
                        position: i + 1,
                        reason: "expected 's', 'f' or ')'",
                    })
                }
            }
        }
        let len = text.chars().count();
        if !closed {
            return Err(Error::Parse {
                position: len + 1,
                reason: "unclosed cycle",
            });
        }
        match chars.next() {
            Some((_, '*')) => {}
            Some((i, _)) => {
                return Err(Error::Parse {
                    position: i + 1,
                    reason: "expected '*'",
                })
            }
            None => {
                return Err(Error::Parse {
                    position: len + 1,
                    reason: "expected '*'",
                })
            }
        }
        if let Some((i, _)) = chars.next() {
            return Err(Error::Parse {
                position: i + 1,
                reason: "trailing characters",
            });
        }
        debug_assert!(open < len);
        Strategy::periodic(prefix, cycle)
    }
}

/// `β = m·r + k`, `0 ≤ k < m`, for `c = 1/(m+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub m: u64,
    pub r: u64,
    pub k: u64,
}

pub fn decompose(beta0: u64, m: u64) -> Result<Decomposition> {
    if m == 0 {
        return Err(Error::InvalidM);
    }
    Ok(Decomposition {
        m,
        r: beta0 / m,
        k: beta0 % m,
    })
}

/// Position in the candidate family; `Finite(i)` takes the terminal success at
/// the `i`-th crossing opportunity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyIndex {
    Finite(u32),
    Infinite,
}

impl fmt::Display for FamilyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyIndex::Finite(i) => write!(f, "h{i}"),
            FamilyIndex::Infinite => f.write_str("hinf"),
        }
    }
}

fn slack_path(prior: BeliefState, c: Threshold) -> impl FnMut(Action) -> i128 {
    let mut slack = prior.slack(c);
    move |a| {
        slack += match a {
            Action::Success => -c.success_cost(),
            Action::Failure => c.failure_gain(),
        };
        slack
    }
}

/// Checks that the mean stays at or below `c` at the prior and after every
/// action but the last. Infinite strategies are decided exactly: one pass over
/// prefix and cycle, plus a nonnegative slack drift per cycle.
pub fn is_feasible(x: &Strategy, prior: BeliefState, c: Threshold) -> bool {
    if prior.slack(c) < 0 {
        return false;
    }
    let mut step = slack_path(prior, c);
    match x.cycle() {
        None => {
            let n = x.prefix().len();
            x.prefix()[..n - 1].iter().all(|&a| step(a) >= 0)
        }
        Some(cycle) => {
            if !x.prefix().iter().all(|&a| step(a) >= 0) {
                return false;
            }
            let mut drift = 0i128;
            for &a in cycle {
                drift += match a {
                    Action::Success => -c.success_cost(),
                    Action::Failure => c.failure_gain(),
                };
                if step(a) < 0 {
                    return false;
                }
            }
            drift >= 0
        }
    }
}

/// 1-based indices of failures that could be turned into successes without
/// pushing the mean above `c` at that period. An empty result means the
/// strategy passes the greedy necessary condition for optimality.
///
/// Infinite strategies are scanned over the prefix and one cycle. When the
/// cycle's slack drift is positive the slack grows without bound, so the scan
/// continues until the first flippable failure turns up.
pub fn greedy_violations(x: &Strategy, prior: BeliefState, c: Threshold) -> Vec<usize> {
    let cost = c.success_cost();
    let step = |a: Action| {
        if a.is_success() {
            -cost
        } else {
            c.failure_gain()
        }
    };
    let mut out = Vec::new();
    let mut slack = prior.slack(c);
    let mut index = 0;
    let mut scan = |actions: &[Action], out: &mut Vec<usize>| {
        for &a in actions {
            index += 1;
            if a == Action::Failure && slack - cost >= 0 {
                out.push(index);
            }
            slack += step(a);
        }
    };

    scan(x.prefix(), &mut out);
    if let Some(cycle) = x.cycle() {
        scan(cycle, &mut out);
        let drift: i128 = cycle.iter().map(|&a| step(a)).sum();
        if drift > 0 && cycle.contains(&Action::Failure) {
            while out.is_empty() {
                scan(cycle, &mut out);
            }
        }
    }
    out
}

fn check_prior(prior: BeliefState, c: Threshold) -> Result<i128> {
    let slack = prior.slack(c);
    if slack < 0 {
        Err(Error::PriorAboveThreshold)
    } else {
        Ok(slack)
    }
}

/// Generates a family member by walking the feasibility frontier: succeed
/// whenever the mean stays within `c`; at a crossing opportunity either take
/// the terminal success (once `idx` opportunities have been seen) or insert
/// the fewest failures that make the next success affordable.
///
/// `h^∞` comes back in `PREFIX(CYCLE)*` form. The prefix runs through the
/// first boundary success that follows a failure run; the cycle is the block
/// between two repeated slack values at later crossing opportunities, which
/// for `c = 1/(m+1)` is `m` failures and one success.
pub fn h_family(prior: BeliefState, c: Threshold, idx: FamilyIndex) -> Result<Strategy> {
    let mut slack = check_prior(prior, c)?;
    let cost = c.success_cost();
    let gain = c.failure_gain();
    let mut actions = Vec::new();
    let mut opportunities: u32 = 0;
    // (slack, position) at crossing opportunities from the second one on
    let mut seen: Vec<(i128, usize)> = Vec::new();

    if let FamilyIndex::Finite(0) = idx {
        return Err(Error::InvalidArgument("family index starts at 1"));
    }

    loop {
        if slack >= cost {
            actions.push(Action::Success);
            slack -= cost;
            continue;
        }
        opportunities += 1;
        match idx {
            FamilyIndex::Finite(i) if opportunities == i => {
                actions.push(Action::Success);
                return Strategy::finite(actions);
            }
            FamilyIndex::Infinite if opportunities >= 2 => {
                if let Some(&(_, start)) = seen.iter().find(|(s, _)| *s == slack) {
                    let cycle = actions.split_off(start);
                    return Strategy::periodic(actions, cycle);
                }
                seen.push((slack, actions.len()));
            }
            _ => {}
        }
        let d = failures_to_cover(slack, c);
        actions.extend(core::iter::repeat_n(Action::Failure, d as usize));
        slack += i128::from(d) * gain;
    }
}

/// `h^2` from the decomposition `β = m·r + k`: `r−α` successes, `m−k`
/// failures, then two successes.
pub fn h2_closed_form(alpha0: u64, beta0: u64, m: u64) -> Result<Strategy> {
    let Decomposition { r, k, .. } = decompose(beta0, m)?;
    if alpha0 == 0 || beta0 == 0 {
        return Err(Error::InvalidPrior {
            alpha: alpha0,
            beta: beta0,
        });
    }
    if r < alpha0 {
        return Err(Error::PriorAboveThreshold);
    }
    let mut actions = vec![Action::Success; (r - alpha0) as usize];
    actions.extend(core::iter::repeat_n(Action::Failure, (m - k) as usize));
    actions.extend([Action::Success, Action::Success]);
    Strategy::finite(actions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::Strategy;
    use alloc::string::ToString;
    use proptest::prelude::*;

    fn prior(a: u64, b: u64) -> BeliefState {
        BeliefState::new(a, b).unwrap()
    }

    fn half() -> Threshold {
        Threshold::new(1, 2).unwrap()
    }

    fn s(text: &str) -> Strategy {
        text.parse().unwrap()
    }

    #[test]
    fn feasibility_examples() {
        assert!(is_feasible(&s("sss"), prior(1, 3), half()));
        assert!(!is_feasible(&s("ssss"), prior(1, 3), half()));
        assert!(is_feasible(&s("ssfs(fs)*"), prior(1, 3), half()));
        assert!(is_feasible(&s("ss(fs)*"), prior(1, 3), half()));
        // negative drift: eventually crosses
        assert!(!is_feasible(&s("ssf(fss)*"), prior(1, 3), half()));
        assert!(!is_feasible(&s("s"), prior(3, 1), half()));
    }

    #[test]
    fn greedy_examples() {
        let green = s("fssfssfsss");
        assert!(greedy_violations(&green, prior(1, 3), half()).contains(&1));
        assert!(greedy_violations(&s("ssfss"), prior(1, 3), half()).is_empty());
        assert!(greedy_violations(&s("sss"), prior(1, 3), half()).is_empty());
        assert!(greedy_violations(&s("ssfs(fs)*"), prior(1, 3), half()).is_empty());
        // positive drift guarantees a flippable failure eventually
        let v = greedy_violations(&s("ss(ffs)*"), prior(1, 3), half());
        assert_eq!(v.first(), Some(&4));
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(3, 1).unwrap(), Decomposition { m: 1, r: 3, k: 0 });
        assert_eq!(decompose(5, 2).unwrap(), Decomposition { m: 2, r: 2, k: 1 });
        assert_eq!(decompose(7, 3).unwrap(), Decomposition { m: 3, r: 2, k: 1 });
        assert!(decompose(7, 0).is_err());
    }

    #[test]
    fn h2_closed_form_examples() {
        assert_eq!(h2_closed_form(1, 3, 1).unwrap().to_text(), "ssfss");
        assert_eq!(h2_closed_form(1, 5, 2).unwrap().to_text(), "sfss");
        assert_eq!(h2_closed_form(2, 7, 3).unwrap().to_text(), "ffss");
        assert_eq!(h2_closed_form(3, 1, 1), Err(Error::PriorAboveThreshold));
    }

    #[test]
    fn family_examples() {
        let h = |idx| h_family(prior(1, 3), half(), idx).unwrap().to_text();
        assert_eq!(h(FamilyIndex::Finite(1)), "sss");
        assert_eq!(h(FamilyIndex::Finite(2)), "ssfss");
        assert_eq!(h(FamilyIndex::Finite(3)), "ssfsfss");
        assert_eq!(h(FamilyIndex::Infinite), "ssfs(fs)*");
        let q = Threshold::new(1, 4).unwrap();
        assert_eq!(
            h_family(prior(2, 7), q, FamilyIndex::Finite(1))
                .unwrap()
                .to_text(),
            "s"
        );
        assert_eq!(
            h_family(prior(2, 7), q, FamilyIndex::Finite(2))
                .unwrap()
                .to_text(),
            "ffss"
        );
        assert_eq!(
            h_family(prior(2, 7), q, FamilyIndex::Infinite)
                .unwrap()
                .to_text(),
            "ffs(fffs)*"
        );
        assert_eq!(
            h_family(prior(3, 1), half(), FamilyIndex::Finite(1)),
            Err(Error::PriorAboveThreshold)
        );
        assert!(h_family(prior(1, 3), half(), FamilyIndex::Finite(0)).is_err());
    }

    #[test]
    fn family_for_general_rational_threshold() {
        // c = 2/5: slack transient before the cycle settles
        let c = Threshold::new(2, 5).unwrap();
        for idx in [1, 2, 3, 7] {
            let h = h_family(prior(1, 4), c, FamilyIndex::Finite(idx)).unwrap();
            assert!(is_feasible(&h, prior(1, 4), c));
            assert!(greedy_violations(&h, prior(1, 4), c).is_empty());
        }
        let inf = h_family(prior(1, 4), c, FamilyIndex::Infinite).unwrap();
        assert!(is_feasible(&inf, prior(1, 4), c));
        assert!(greedy_violations(&inf, prior(1, 4), c).is_empty());
    }

    #[test]
    fn parse_examples() {
        let x = s("ssfss");
        assert_eq!(x.len(), Some(5));
        let y = s("ssfs(fs)*");
        assert_eq!(
            y.prefix().iter().map(|a| a.symbol()).collect::<String>(),
            "ssfs"
        );
        assert_eq!(y.cycle().unwrap(), &[Action::Failure, Action::Success]);
        assert_eq!(s("(s)*").prefix().len(), 0);
        assert_eq!(
            "sxf".parse::<Strategy>(),
            Err(Error::Parse {
                position: 2,
                reason: "expected 's', 'f' or '('"
            })
        );
        assert!("".parse::<Strategy>().is_err());
        assert!("ss()*".parse::<Strategy>().is_err());
        assert!("ss(fs)".parse::<Strategy>().is_err());
        assert!("ss(fs".parse::<Strategy>().is_err());
        assert!("ss(fs)*s".parse::<Strategy>().is_err());
        assert!("ss(fs)+".parse::<Strategy>().is_err());
    }

    #[test]
    fn actions_iterate_cycle() {
        let y = s("s(fs)*");
        let seq: String = y.actions().take(6).map(|a| a.symbol()).collect();
        assert_eq!(seq, "sfsfsf");
        assert_eq!(s("sfs").actions().count(), 3);
    }

    fn grid() -> impl Iterator<Item = (u64, u64, u64)> {
        (1..=5u64).flat_map(|a| {
            (1..=5u64).flat_map(move |b| {
                (1..=4u64).filter_map(move |m| (a * (m + 1) <= a + b).then_some((a, b, m)))
            })
        })
    }

    #[test]
    fn family_is_feasible_and_greedy_on_grid() {
        for (a, b, m) in grid() {
            let c = Threshold::unit(m).unwrap();
            let idxs = (1..=10)
                .map(FamilyIndex::Finite)
                .chain([FamilyIndex::Infinite]);
            for idx in idxs {
                let h = h_family(prior(a, b), c, idx).unwrap();
                assert!(is_feasible(&h, prior(a, b), c), "{a} {b} {m} {idx}: {h}");
                assert!(
                    greedy_violations(&h, prior(a, b), c).is_empty(),
                    "{a} {b} {m} {idx}: {h}"
                );
            }
        }
    }

    #[test]
    fn family_lengths_strictly_increase() {
        for (a, b, m) in grid() {
            let c = Threshold::unit(m).unwrap();
            let lens: Vec<usize> = (1..=50)
                .map(|i| {
                    h_family(prior(a, b), c, FamilyIndex::Finite(i))
                        .unwrap()
                        .len()
                        .unwrap()
                })
                .collect();
            assert!(lens.windows(2).all(|w| w[0] < w[1]), "{a} {b} {m}");
        }
    }

    // Explicit structure for c = 1/(m+1), built independently of the walk.
    #[test]
    fn family_structure_matches_decomposition() {
        for (a, b, m) in grid() {
            let c = Threshold::unit(m).unwrap();
            let Decomposition { r, k, .. } = decompose(b, m).unwrap();
            let q = (r - a) as usize;
            let text = |i: u32| {
                h_family(prior(a, b), c, FamilyIndex::Finite(i))
                    .unwrap()
                    .to_text()
            };

            assert_eq!(text(1), "s".repeat(q + 1));
            let head = "s".repeat(q) + &"f".repeat((m - k) as usize) + "s";
            let block = "f".repeat(m as usize) + "s";
            for i in 2..=12u32 {
                let expected = head.clone() + &block.repeat(i as usize - 2) + "s";
                assert_eq!(text(i), expected);
                let h = h_family(prior(a, b), c, FamilyIndex::Finite(i)).unwrap();
                assert_eq!(h.successes().unwrap(), q + i as usize);
            }
            let inf = h_family(prior(a, b), c, FamilyIndex::Infinite).unwrap();
            assert_eq!(inf.to_text(), head.clone() + "(" + &block + ")*");
            assert_eq!(
                h2_closed_form(a, b, m).unwrap(),
                h_family(prior(a, b), c, FamilyIndex::Finite(2)).unwrap()
            );
        }
    }

    proptest! {
        // Feasibility through the slack walk equals a direct replay through
        // the belief module.
        #[test]
        fn feasibility_matches_belief_replay(
            a in 1u64..6, b in 1u64..12, den in 2u64..7, num_off in 0u64..6,
            bits in proptest::collection::vec(any::<bool>(), 1..30),
        ) {
            let num = 1 + num_off % (den - 1);
            let c = Threshold::new(num, den).unwrap();
            let actions: Vec<Action> = bits.iter().map(|&b| if b { Action::Success } else { Action::Failure }).collect();
            let x = Strategy::finite(actions.clone()).unwrap();
            let mut state = prior(a, b);
            let mut ok = state.within_threshold(c);
            for &act in &actions[..actions.len() - 1] {
                state = state.update(act);
                ok &= state.within_threshold(c);
            }
            prop_assert_eq!(is_feasible(&x, prior(a, b), c), ok);
        }

        // Infinite feasibility agrees with replaying many periods.
        #[test]
        fn periodic_feasibility_matches_long_replay(
            a in 1u64..5, b in 1u64..10, m in 1u64..4,
            pre in proptest::collection::vec(any::<bool>(), 0..8),
            cyc in proptest::collection::vec(any::<bool>(), 1..6),
        ) {
            let c = Threshold::unit(m).unwrap();
            let to = |v: &[bool]| v.iter().map(|&b| if b { Action::Success } else { Action::Failure }).collect::<Vec<_>>();
            let x = Strategy::periodic(to(&pre), to(&cyc)).unwrap();
            let mut state = prior(a, b);
            let mut ok = state.within_threshold(c);
            for act in x.actions().take(400) {
                state = state.update(act);
                ok &= state.within_threshold(c);
            }
            prop_assert_eq!(is_feasible(&x, prior(a, b), c), ok);
        }

        #[test]
        fn text_round_trip(
            pre in proptest::collection::vec(any::<bool>(), 0..12),
            cyc in proptest::option::of(proptest::collection::vec(any::<bool>(), 1..6)),
        ) {
            let mut text: String = pre.iter().map(|&b| if b { 's' } else { 'f' }).collect();
            if let Some(cyc) = &cyc {
                text.push('(');
                text.extend(cyc.iter().map(|&b| if b { 's' } else { 'f' }));
                text.push_str(")*");
            }
            prop_assume!(!text.is_empty());
            let parsed: Strategy = text.parse().unwrap();
            prop_assert_eq!(parsed.to_string(), text);
        }
    }
}

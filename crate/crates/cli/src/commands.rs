use serde::Serialize;
use serde_json::{json, Value};

use feign_core::oracle::{dp_best, exhaustive_best, value_iteration};
use feign_core::sim::{play_guesser, play_strategy};
use feign_core::solver::{classify, delta_grid, sweep};
use feign_core::strategy::{greedy_violations, h_family, is_feasible};
use feign_core::valuation::{payoff, z_threshold};
use feign_core::{
    Action, BeliefState, FamilyIndex, GuesserConfig, OptimalKind, ProblemInstance, Strategy,
    Threshold, Trajectory,
};

use crate::cli::{Command, OracleMode};
use crate::error::CliError;
use crate::output::{Report, Table};

fn to_value<T: Serialize>(value: &T) -> Result<Value, CliError> {
    serde_json::to_value(value).map_err(|e| CliError::Internal(e.to_string()))
}

fn text(seq: &[Action]) -> String {
    seq.iter().map(|a| a.symbol()).collect()
}

fn opt<T: ToString>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Solve {
            prior,
            m,
            delta,
            tie_tol,
            ..
        } => solve(prior.alpha, prior.beta, *m, *delta, *tie_tol),
        Command::Enumerate {
            prior,
            threshold,
            max_index,
            ..
        } => enumerate(
            prior.alpha,
            prior.beta,
            threshold.c_num,
            threshold.c_den,
            *max_index,
        ),
        Command::Evaluate {
            strategy,
            delta,
            alpha,
            beta,
            c_num,
            c_den,
            ..
        } => {
            let context = match (alpha, beta, c_num, c_den) {
                (Some(a), Some(b), Some(n), Some(d)) => Some((*a, *b, *n, *d)),
                _ => None,
            };
            evaluate(strategy, *delta, context)
        }
        Command::Oracle {
            prior,
            threshold,
            delta,
            horizon,
            mode,
            tol,
            ..
        } => oracle(
            prior.alpha,
            prior.beta,
            threshold.c_num,
            threshold.c_den,
            *delta,
            *horizon,
            *mode,
            *tol,
        ),
        Command::Thresholds { n_max, tol, .. } => thresholds(*n_max, *tol),
        Command::Simulate {
            prior,
            threshold,
            strategy,
            guesser_p,
            seed,
            max_periods,
            delta,
            ..
        } => {
            let source = match (strategy, guesser_p, seed) {
                (Some(s), _, _) => Source::Strategy(s.clone()),
                (None, Some(p), Some(seed)) => Source::Guesser(*p, *seed),
                _ => {
                    return Err(CliError::Input(
                        "pass --strategy or --guesser-p with --seed".into(),
                    ))
                }
            };
            simulate(
                prior.alpha,
                prior.beta,
                threshold.c_num,
                threshold.c_den,
                source,
                *max_periods,
                *delta,
            )
        }
        Command::Sweep {
            prior,
            m,
            delta_min,
            delta_max,
            step,
            tie_tol,
            ..
        } => sweep_cmd(
            prior.alpha,
            prior.beta,
            *m,
            *delta_min,
            *delta_max,
            *step,
            *tie_tol,
        ),
    }
}

fn kind_label(kind: OptimalKind) -> &'static str {
    match kind {
        OptimalKind::Unique(_) => "unique",
        OptimalKind::TieLow => "tie_low",
        OptimalKind::TieHigh => "tie_high",
        OptimalKind::TieAll => "tie_all",
    }
}

#[derive(Serialize)]
struct MemberPayoff {
    index: String,
    strategy: String,
    payoff: f64,
}

pub fn solve(alpha: u64, beta: u64, m: u64, delta: f64, tie_tol: f64) -> Result<Report, CliError> {
    let inst = ProblemInstance::new(alpha, beta, m, delta)?;
    let set = classify(&inst, tie_tol)?;
    let decomposition = inst.decomposition();
    let mut members = Vec::new();
    let mut table = Table::new(&["index", "strategy", "payoff", "kind", "z_low", "z_high"]);
    for &(idx, value) in &set.payoffs {
        let strategy = h_family(inst.prior(), inst.threshold(), idx)?.to_string();
        table.push(vec![
            idx.to_string(),
            strategy.clone(),
            value.to_string(),
            kind_label(set.kind).into(),
            set.z_low.to_string(),
            set.z_high.to_string(),
        ]);
        members.push(MemberPayoff {
            index: idx.to_string(),
            strategy,
            payoff: value,
        });
    }
    let result = json!({
        "kind": kind_label(set.kind),
        "members": members.iter().map(|p| p.strategy.clone()).collect::<Vec<_>>(),
        "open_ended": set.is_open_ended(),
        "z_low": set.z_low,
        "z_high": set.z_high,
        "r": decomposition.r,
        "k": decomposition.k,
        "payoffs": to_value(&members)?,
    });
    let params =
        json!({ "alpha": alpha, "beta": beta, "m": m, "delta": delta, "tie_tol": tie_tol });
    Ok(Report {
        params,
        result,
        table,
    })
}

#[derive(Serialize)]
struct FamilyEntry {
    index: String,
    strategy: String,
    length: Option<usize>,
    successes: Option<usize>,
}

pub fn enumerate(
    alpha: u64,
    beta: u64,
    c_num: u64,
    c_den: u64,
    max_index: u32,
) -> Result<Report, CliError> {
    if max_index == 0 {
        return Err(CliError::Input("--max-index must be at least 1".into()));
    }
    let c = Threshold::new(c_num, c_den)?;
    let prior = BeliefState::new(alpha, beta)?;
    let mut entries = Vec::new();
    let mut table = Table::new(&["index", "strategy", "length", "successes"]);
    for idx in (1..=max_index)
        .map(FamilyIndex::Finite)
        .chain([FamilyIndex::Infinite])
    {
        let h = h_family(prior, c, idx)?;
        table.push(vec![
            idx.to_string(),
            h.to_string(),
            opt(h.len()),
            opt(h.successes()),
        ]);
        entries.push(FamilyEntry {
            index: idx.to_string(),
            strategy: h.to_string(),
            length: h.len(),
            successes: h.successes(),
        });
    }
    let result = json!({
        "strategies": entries.iter().map(|e| e.strategy.clone()).collect::<Vec<_>>(),
        "family": to_value(&entries)?,
    });
    let params = json!({ "alpha": alpha, "beta": beta, "c_num": c_num, "c_den": c_den, "max_index": max_index });
    Ok(Report {
        params,
        result,
        table,
    })
}

pub fn evaluate(
    strategy: &str,
    delta: f64,
    context: Option<(u64, u64, u64, u64)>,
) -> Result<Report, CliError> {
    let x: Strategy = strategy.parse()?;
    let value = payoff(&x, delta)?;
    let mut params = json!({ "strategy": strategy, "delta": delta });
    let mut result = json!({ "strategy": x.to_string(), "payoff": value, "finite": x.is_finite() });
    let mut table = Table::new(&[
        "strategy",
        "delta",
        "payoff",
        "feasible",
        "greedy_violations",
    ]);
    let mut feasible = String::new();
    let mut violations_cell = String::new();
    if let Some((a, b, n, d)) = context {
        let prior = BeliefState::new(a, b)?;
        let c = Threshold::new(n, d)?;
        let ok = is_feasible(&x, prior, c);
        let violations = greedy_violations(&x, prior, c);
        params["alpha"] = json!(a);
        params["beta"] = json!(b);
        params["c_num"] = json!(n);
        params["c_den"] = json!(d);
        result["feasible"] = json!(ok);
        result["greedy_violations"] = json!(violations);
        feasible = ok.to_string();
        violations_cell = violations
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ");
    }
    table.push(vec![
        x.to_string(),
        delta.to_string(),
        value.to_string(),
        feasible,
        violations_cell,
    ]);
    Ok(Report {
        params,
        result,
        table,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn oracle(
    alpha: u64,
    beta: u64,
    c_num: u64,
    c_den: u64,
    delta: f64,
    horizon: usize,
    mode: OracleMode,
    tol: f64,
) -> Result<Report, CliError> {
    let c = Threshold::new(c_num, c_den)?;
    let prior = BeliefState::new(alpha, beta)?;
    let (mode_name, value, best) = match mode {
        OracleMode::Exhaustive => {
            let r = exhaustive_best(prior, c, delta, horizon)?;
            ("exhaustive", r.value, Some(text(&r.best_sequence)))
        }
        OracleMode::Dp => {
            let r = dp_best(prior, c, delta, horizon)?;
            ("dp", r.value, Some(text(&r.best_sequence)))
        }
        OracleMode::Vi => ("vi", value_iteration(prior, c, delta, tol)?, None),
    };
    let mut params = json!({
        "alpha": alpha, "beta": beta, "c_num": c_num, "c_den": c_den, "delta": delta, "mode": mode_name,
    });
    if mode == OracleMode::Vi {
        params["tol"] = json!(tol);
    } else {
        params["horizon"] = json!(horizon);
    }
    let result = json!({ "value": value, "best_sequence": best });
    let mut table = Table::new(&["mode", "value", "best_sequence"]);
    table.push(vec![
        mode_name.into(),
        value.to_string(),
        best.clone().unwrap_or_default(),
    ]);
    Ok(Report {
        params,
        result,
        table,
    })
}

pub fn thresholds(n_max: u32, tol: f64) -> Result<Report, CliError> {
    if n_max == 0 {
        return Err(CliError::Input("--n-max must be at least 1".into()));
    }
    let mut roots = Vec::new();
    let mut table = Table::new(&["n", "z", "residual"]);
    for n in 1..=n_max {
        let r = z_threshold(n, tol)?;
        table.push(vec![n.to_string(), r.z.to_string(), r.residual.to_string()]);
        roots.push(json!({ "n": n, "z": r.z, "residual": r.residual }));
    }
    let result = json!({ "roots": roots });
    Ok(Report {
        params: json!({ "n_max": n_max, "tol": tol }),
        result,
        table,
    })
}

pub enum Source {
    Strategy(String),
    Guesser(f64, u64),
}

#[derive(Serialize)]
struct RecordOut {
    period: u64,
    action: char,
    mean_num: u64,
    mean_den: u64,
    crossed: bool,
}

fn trajectory_report(t: &Trajectory) -> Result<(Value, Table), CliError> {
    let records: Vec<RecordOut> = t
        .records
        .iter()
        .map(|r| RecordOut {
            period: r.period,
            action: r.action.symbol(),
            mean_num: *r.posterior_mean.numer(),
            mean_den: *r.posterior_mean.denom(),
            crossed: r.crossed,
        })
        .collect();
    let mut table = Table::new(&["period", "action", "mean_num", "mean_den", "crossed"]);
    for r in &records {
        table.push(vec![
            r.period.to_string(),
            r.action.to_string(),
            r.mean_num.to_string(),
            r.mean_den.to_string(),
            r.crossed.to_string(),
        ]);
    }
    let result = json!({
        "terminated": t.terminated,
        "termination_period": t.termination_period,
        "discounted_payoff": t.discounted_payoff,
        "records": to_value(&records)?,
    });
    Ok((result, table))
}

pub fn simulate(
    alpha: u64,
    beta: u64,
    c_num: u64,
    c_den: u64,
    source: Source,
    max_periods: u64,
    delta: f64,
) -> Result<Report, CliError> {
    let c = Threshold::new(c_num, c_den)?;
    let prior = BeliefState::new(alpha, beta)?;
    let mut params = json!({
        "alpha": alpha, "beta": beta, "c_num": c_num, "c_den": c_den, "max_periods": max_periods, "delta": delta,
    });
    let trajectory = match source {
        Source::Strategy(text) => {
            let x: Strategy = text.parse()?;
            params["strategy"] = json!(text);
            play_strategy(prior, c, &x, delta, max_periods)?
        }
        Source::Guesser(p, seed) => {
            params["guesser_p"] = json!(p);
            params["seed"] = json!(seed);
            play_guesser(prior, c, GuesserConfig::new(p, seed)?, delta, max_periods)?
        }
    };
    let (result, table) = trajectory_report(&trajectory)?;
    Ok(Report {
        params,
        result,
        table,
    })
}

pub fn sweep_cmd(
    alpha: u64,
    beta: u64,
    m: u64,
    delta_min: f64,
    delta_max: f64,
    step: f64,
    tie_tol: f64,
) -> Result<Report, CliError> {
    let grid = delta_grid(delta_min, delta_max, step)?;
    let rows = sweep(alpha, beta, m, &grid, tie_tol)?;
    let mut table = Table::new(&["delta", "regime", "best_payoff", "z_low", "z_high"]);
    let mut out = Vec::with_capacity(rows.len());
    for row in &rows {
        table.push(vec![
            row.delta.to_string(),
            row.label().into(),
            row.best_payoff.to_string(),
            row.z_low.to_string(),
            row.z_high.to_string(),
        ]);
        out.push(json!({
            "delta": row.delta,
            "regime": row.label(),
            "best_payoff": row.best_payoff,
            "z_low": row.z_low,
            "z_high": row.z_high,
        }));
    }
    let params = json!({
        "alpha": alpha, "beta": beta, "m": m,
        "delta_min": delta_min, "delta_max": delta_max, "step": step, "tie_tol": tie_tol,
    });
    Ok(Report {
        params,
        result: json!({ "rows": out }),
        table,
    })
}
